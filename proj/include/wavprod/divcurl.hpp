#ifndef WAVPROD_DIVCURL_HPP
#define WAVPROD_DIVCURL_HPP

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "wavprod/multiplier.hpp"
#include "wavprod/paraproduct.hpp"
#include "wavprod/spaces.hpp"

namespace wavprod {

struct VectorField {
    std::vector<GridFunction> components;

    int dims() const { return static_cast<int>(components.size()); }

    void validate() const {
        if (components.empty())
            throw std::invalid_argument("VectorField: no components");
        for (const auto& c : components) {
            if (!c.same_geometry(components.front()))
                throw std::invalid_argument("VectorField: mismatched component geometry");
            for (std::int64_t i = 0; i < c.total_cells(); ++i)
                if (!std::isfinite(c[i]))
                    throw std::invalid_argument("VectorField: non-finite sample");
        }
    }
};

inline GridFunction riesz_transform(const GridFunction& f, int axis) {
    return apply_multiplier(riesz_operator(f.dims(), axis), f);
}

// spectral partial derivative along one axis of the periodic box
inline GridFunction spectral_derivative(const GridFunction& f, int axis) {
    if (axis < 0 || axis >= f.dims())
        throw std::invalid_argument("spectral_derivative: bad axis");
    MultiplierOperator op;
    op.dims = f.dims();
    op.odd = true;
    const double freq_unit = 2.0 * std::numbers::pi / f.box().side;
    op.symbol = [axis, freq_unit](std::array<std::int64_t, 2> xi) -> std::complex<double> {
        return {0.0, freq_unit * static_cast<double>(xi[static_cast<std::size_t>(axis)])};
    };
    return apply_multiplier(op, f);
}

// F = grad u (curl-free), G = rot v = (-d2 v, d1 v) (div-free), n = 2
inline std::pair<VectorField, VectorField> potential_fields(const GridFunction& u,
                                                            const GridFunction& v) {
    if (u.dims() != 2 || !u.same_geometry(v))
        throw std::invalid_argument("potential_fields: need two 2D potentials on one grid");
    VectorField F{{spectral_derivative(u, 0), spectral_derivative(u, 1)}};
    VectorField G{{-1.0 * spectral_derivative(v, 1), spectral_derivative(v, 0)}};
    double scale = std::max({1.0, linf_norm(F.components[0]), linf_norm(F.components[1]),
                             linf_norm(G.components[0]), linf_norm(G.components[1])});
    GridFunction curl = spectral_derivative(F.components[1], 0) - spectral_derivative(F.components[0], 1);
    GridFunction dive = spectral_derivative(G.components[0], 0) + spectral_derivative(G.components[1], 1);
    if (linf_norm(curl) > 1e-10 * scale || linf_norm(dive) > 1e-10 * scale)
        throw std::runtime_error("potential_fields: curl/div residual above tolerance");
    return {std::move(F), std::move(G)};
}

struct DivCurlReport {
    double curl_residual = 0.0;
    double div_residual = 0.0;
    double riesz_identity_residual = 0.0;    // ||sum_j R_j G_j||_inf
    double potential_recovery_residual = 0.0; // worst ||F_j - R_j f||_inf, scaled
    double split_residual = 0.0;              // || (S + T) - F.G ||_inf
    double cancellation_residual = 0.0;       // rearranged principal part vs direct
    double integral_FG = 0.0;
    double l2_F = 0.0;
    double l2_G = 0.0;
    double hlog = 0.0;
    double h1_F = 0.0;
    double bmo_plus_G = 0.0;
    double ratio = 0.0;
    double h1_G = 0.0;
    double bmo_plus_F = 0.0;
    double ratio_swapped = 0.0;
    GridFunction product;
    GridFunction principal;    // sum_j S(F_j, G_j)
    GridFunction renormalized; // sum_j T(F_j, G_j)
};

namespace detail {

inline WaveletCoeffs mean_free_coeffs(const GridFunction& f, const FilterPair& filt) {
    WaveletCoeffs c = dwt_forward(f, f.box().min_level(), filt);
    std::fill(c.scaling().begin(), c.scaling().end(), 0.0);
    return c;
}

} // namespace detail

inline DivCurlReport divcurl_product(const VectorField& F_in, const VectorField& G_in,
                                     const FilterPair& filt) {
    F_in.validate();
    G_in.validate();
    const int n = F_in.dims();
    if (n != G_in.dims() || !F_in.components[0].same_geometry(G_in.components[0]))
        throw std::invalid_argument("divcurl_product: mismatched fields");

    // mean-normalize the components
    VectorField F = F_in, G = G_in;
    double vol = std::pow(F.components[0].box().side, n);
    auto drop_mean = [vol](GridFunction& c) {
        double m = integrate(c) / vol;
        for (auto& s : c.samples()) s -= m;
    };
    for (auto& c : F.components) drop_mean(c);
    for (auto& c : G.components) drop_mean(c);

    DivCurlReport rep;
    double scale = 1.0;
    for (const auto& c : F.components) scale = std::max(scale, linf_norm(c));
    for (const auto& c : G.components) scale = std::max(scale, linf_norm(c));

    if (n == 2) {
        GridFunction curl = spectral_derivative(F.components[1], 0) -
                            spectral_derivative(F.components[0], 1);
        GridFunction dive = spectral_derivative(G.components[0], 0) +
                            spectral_derivative(G.components[1], 1);
        rep.curl_residual = linf_norm(curl) / scale;
        rep.div_residual = linf_norm(dive) / scale;
        if (rep.curl_residual > 1e-8 || rep.div_residual > 1e-8)
            throw std::invalid_argument("divcurl_product: fields fail the curl/div precondition");
    }

    GridFunction rg = riesz_transform(G.components[0], 0);
    for (int a = 1; a < n; ++a) rg = rg + riesz_transform(G.components[a], a);
    rep.riesz_identity_residual = linf_norm(rg) / scale;

    // scalar potential: f = -sum_j R_j F_j, with F_j = R_j f
    GridFunction f = -1.0 * riesz_transform(F.components[0], 0);
    for (int a = 1; a < n; ++a) f = f - riesz_transform(F.components[a], a);
    for (int a = 0; a < n; ++a)
        rep.potential_recovery_residual = std::max(
            rep.potential_recovery_residual,
            linf_norm(F.components[static_cast<std::size_t>(a)] - riesz_transform(f, a)) / scale);

    const int j0 = F.components[0].box().min_level();
    rep.product = F.components[0] * G.components[0];
    for (int a = 1; a < n; ++a)
        rep.product = rep.product + F.components[static_cast<std::size_t>(a)] *
                                        G.components[static_cast<std::size_t>(a)];

    bool first = true;
    for (int a = 0; a < n; ++a) {
        ProductSplit ps = paraproduct_split(F.components[static_cast<std::size_t>(a)],
                                            G.components[static_cast<std::size_t>(a)], j0, filt, true);
        if (first) {
            rep.principal = ps.pi3;
            rep.renormalized = ps.pi1 + ps.pi2;
            first = false;
        } else {
            rep.principal = rep.principal + ps.pi3;
            rep.renormalized = rep.renormalized + (ps.pi1 + ps.pi2);
        }
    }
    rep.split_residual = linf_norm((rep.principal + rep.renormalized) - rep.product) / scale;

    // rearranged principal part: sum_j S(R_j f, G_j) + S(f, R_j G_j)
    GridFunction rearranged(rep.product.box(), rep.product.level());
    for (int a = 0; a < n; ++a) {
        const GridFunction& Ga = G.components[static_cast<std::size_t>(a)];
        rearranged = rearranged + paraproduct_split(riesz_transform(f, a), Ga, j0, filt, true).pi3;
        rearranged = rearranged + paraproduct_split(f, riesz_transform(Ga, a), j0, filt, true).pi3;
    }
    double prin_scale = std::max(1.0, linf_norm(rep.principal));
    rep.cancellation_residual = linf_norm(rearranged - rep.principal) / prin_scale;

    rep.integral_FG = integrate(rep.product);
    double f2 = 0.0, g2 = 0.0;
    for (const auto& c : F.components) { double t = l2_norm(c); f2 += t * t; }
    for (const auto& c : G.components) { double t = l2_norm(c); g2 += t * t; }
    rep.l2_F = std::sqrt(f2);
    rep.l2_G = std::sqrt(g2);

    rep.hlog = hlog_norm(rep.product);
    double h1f2 = 0.0, h1g2 = 0.0, bmoF = 0.0, bmoG = 0.0;
    for (const auto& c : F.components) {
        WaveletCoeffs w = detail::mean_free_coeffs(c, filt);
        double t = h1_square_norm(w);
        h1f2 += t * t;
        bmoF = std::max(bmoF, bmo_plus_norm(c, w));
    }
    for (const auto& c : G.components) {
        WaveletCoeffs w = detail::mean_free_coeffs(c, filt);
        double t = h1_square_norm(w);
        h1g2 += t * t;
        bmoG = std::max(bmoG, bmo_plus_norm(c, w));
    }
    rep.h1_F = std::sqrt(h1f2);
    rep.h1_G = std::sqrt(h1g2);
    rep.bmo_plus_F = bmoF;
    rep.bmo_plus_G = bmoG;
    if (rep.h1_F > 0.0 && rep.bmo_plus_G > 0.0) rep.ratio = rep.hlog / (rep.h1_F * rep.bmo_plus_G);
    if (rep.h1_G > 0.0 && rep.bmo_plus_F > 0.0)
        rep.ratio_swapped = rep.hlog / (rep.h1_G * rep.bmo_plus_F);
    return rep;
}

} // namespace wavprod

#endif
