#ifndef WAVPROD_FILTERS_HPP
#define WAVPROD_FILTERS_HPP

#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace wavprod {

// Orthonormal low-pass/high-pass tap pair defining the MRA. The support
// parameter m is taps-1; after centering by (m-1)/2 the scaling function and
// wavelet live in 1/2 + m(-1/2, 1/2].
struct FilterPair {
    std::string name;
    std::vector<double> lowpass;
    std::vector<double> highpass;
    int vanishing_moments = 0;
    int support_m = 0;
    bool violates_moment_condition = false; // haar only: int x psi dx != 0

    int taps() const { return static_cast<int>(lowpass.size()); }
    // integer shift aligning filter index space with centered cube index space
    int phase() const { return taps() / 2 - 1; }
};

namespace detail {

// Daubechies extremal-phase taps, spectral factorization carried out at 60
// decimal digits and rounded to 21 significant digits.
inline const std::map<std::string, std::pair<int, std::vector<double>>>& filter_catalog() {
    static const std::map<std::string, std::pair<int, std::vector<double>>> cat = {
        {"haar", {1, {0.707106781186547524401, 0.707106781186547524401}}},
        {"db2", {2, {0.482962913144534143375, 0.836516303737807905575,
                     0.224143868042013381026, -0.129409522551260381174}}},
        {"db3", {3, {0.332670552950082615999, 0.806891509311092576494,
                     0.459877502118491570095, -0.135011020010254588696,
                     -0.0854412738820266616928, 0.0352262918857095366027}}},
        {"db4", {4, {0.230377813308896500863, 0.71484657055291564709,
                     0.630880767929858907882, -0.0279837694168598542114,
                     -0.18703481171909308408, 0.0308413818355607636272,
                     0.0328830116668851997354, -0.0105974017850690321049}}},
        {"db5", {5, {0.160102397974192914481, 0.60382926979718967054,
                     0.724308528437772927728, 0.138428145901320731505,
                     -0.242294887066382031863, -0.0322448695846383746485,
                     0.0775714938400457135231, -0.00624149021279827427419,
                     -0.0125807519990819994685, 0.003335725285473771278}}},
        {"db6", {6, {0.111540743350109463621, 0.494623890398453085677,
                     0.751133908021095350679, 0.315250351709197629086,
                     -0.226264693965439820076, -0.129766867567261935562,
                     0.0975016055873230491023, 0.0275228655303057286255,
                     -0.0315820393174860295651, 0.000553842201161496139252,
                     0.00477725751094551063964, -0.00107730108530847956485}}},
        {"db7", {7, {0.07785205408500917902, 0.396539319481917306539,
                     0.729132090846235119917, 0.469782287405193122472,
                     -0.143906003928564975405, -0.224036184993874982638,
                     0.0713092192668302647509, 0.0806126091510830719129,
                     -0.0380299369350144135796, -0.0165745416306668806541,
                     0.012550998556099840613, 0.000429577972921366521132,
                     -0.00180164070404749091527, 0.000353713799974520248446}}},
        {"db8", {8, {0.054415842243104009955, 0.312871590914299970659,
                     0.675630736297289806808, 0.585354683654206712771,
                     -0.0158291052563493056674, -0.284015542961546926516,
                     0.000472484573913282770361, 0.128747426620478458857,
                     -0.0173693010018075461696, -0.0440882539307947515068,
                     0.0139810279173982816487, 0.00874609404740577671638,
                     -0.00487035299345157431042, -0.000391740373376947046298,
                     0.00067544940645056936637, -0.000117476784124769533731}}},
    };
    return cat;
}

inline void validate_filter(const FilterPair& f) {
    const auto& h = f.lowpass;
    const int t = f.taps();
    double sum = 0.0, sum2 = 0.0;
    for (double v : h) { sum += v; sum2 += v * v; }
    if (std::abs(sum - std::sqrt(2.0)) > 1e-12)
        throw std::logic_error(f.name + ": lowpass sum != sqrt(2)");
    if (std::abs(sum2 - 1.0) > 1e-12)
        throw std::logic_error(f.name + ": lowpass not unit-norm");
    for (int k = 1; 2 * k < t; ++k) {
        double dot = 0.0;
        for (int i = 0; i + 2 * k < t; ++i) dot += h[i] * h[i + 2 * k];
        if (std::abs(dot) > 1e-12)
            throw std::logic_error(f.name + ": even-shift orthogonality violated");
    }
    // N discrete vanishing moments of the highpass filter, relative to the
    // magnitude of the summands (cancellation grows with i^p)
    for (int p = 0; p < f.vanishing_moments; ++p) {
        double mom = 0.0, mag = 0.0;
        for (int i = 0; i < t; ++i) {
            double term = f.highpass[i] * std::pow(static_cast<double>(i), p);
            mom += term;
            mag += std::abs(term);
        }
        if (std::abs(mom) > 1e-10 * std::max(1.0, mag))
            throw std::logic_error(f.name + ": highpass moment " + std::to_string(p) + " nonzero");
    }
}

} // namespace detail

inline FilterPair load_filter(std::string_view name) {
    const auto& cat = detail::filter_catalog();
    auto it = cat.find(std::string(name));
    if (it == cat.end())
        throw std::invalid_argument("load_filter: unknown filter '" + std::string(name) + "'");
    FilterPair f;
    f.name = it->first;
    f.vanishing_moments = it->second.first;
    f.lowpass = it->second.second;
    const int t = f.taps();
    f.support_m = t - 1;
    f.highpass.resize(t);
    for (int i = 0; i < t; ++i)
        f.highpass[i] = (i % 2 == 0 ? 1.0 : -1.0) * f.lowpass[t - 1 - i];
    f.violates_moment_condition = (f.name == "haar");
    detail::validate_filter(f);
    return f;
}

inline std::vector<std::string> filter_names() {
    std::vector<std::string> names;
    for (const auto& [k, v] : detail::filter_catalog()) names.push_back(k);
    return names;
}

} // namespace wavprod

#endif
