#include "qlbeam/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "qlbeam/error.hpp"

namespace qlbeam {

namespace {

double binomial(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
    return r;
}

void validate_profile(const CoefficientProfile &profile) {
    if (const auto *lat = std::get_if<LatticeProfile>(&profile)) {
        if (lat->lengths.empty() || lat->lengths.size() != lat->values.size()) {
            throw Error(ErrorKind::invalid_argument, "lattice needs matching lengths and values");
        }
        for (double l : lat->lengths) {
            if (!(l > 0.0) || !std::isfinite(l)) {
                throw Error(ErrorKind::invalid_argument, "lattice element lengths must be > 0");
            }
        }
        for (double v : lat->values) {
            if (!std::isfinite(v)) throw Error(ErrorKind::invalid_argument, "non-finite lattice value");
        }
    } else if (const auto *h = std::get_if<HarmonicProfile>(&profile)) {
        if (!std::isfinite(h->amplitude) || !std::isfinite(h->omega) || !std::isfinite(h->phase)) {
            throw Error(ErrorKind::invalid_argument, "non-finite harmonic profile");
        }
    } else if (!std::isfinite(std::get<ConstantProfile>(profile).value)) {
        throw Error(ErrorKind::invalid_argument, "non-finite coefficient");
    }
}

}  // namespace

double eval_profile(const CoefficientProfile &profile, double z) {
    if (const auto *c = std::get_if<ConstantProfile>(&profile)) return c->value;
    if (const auto *h = std::get_if<HarmonicProfile>(&profile)) {
        return h->amplitude * std::cos(h->omega * z + h->phase);
    }
    const auto &lat = std::get<LatticeProfile>(profile);
    const double period = std::accumulate(lat.lengths.begin(), lat.lengths.end(), 0.0);
    double s = std::fmod(z - lat.z_origin, period);
    if (s < 0.0) s += period;
    for (std::size_t k = 0; k < lat.lengths.size(); ++k) {
        if (s < lat.lengths[k]) return lat.values[k];
        s -= lat.lengths[k];
    }
    return lat.values.back();
}

PotentialSpec::PotentialSpec(std::vector<PotentialTerm> terms) : terms_(std::move(terms)) {
    std::set<int> seen;
    for (const auto &t : terms_) {
        if (t.power < 0) throw Error(ErrorKind::invalid_argument, "potential powers must be >= 0");
        if (!seen.insert(t.power).second) {
            throw Error(ErrorKind::invalid_argument,
                        "potential power " + std::to_string(t.power) + " given twice");
        }
        validate_profile(t.coefficient);
    }
    std::sort(terms_.begin(), terms_.end(),
              [](const PotentialTerm &a, const PotentialTerm &b) { return a.power < b.power; });
}

PotentialSpec PotentialSpec::free_space() { return PotentialSpec(); }

PotentialSpec PotentialSpec::linear_lens(double K) {
    return PotentialSpec({{2, ConstantProfile{0.5 * K}}});
}

PotentialSpec PotentialSpec::quartic(double K, double lambda) {
    return PotentialSpec({{2, ConstantProfile{0.5 * K}}, {4, ConstantProfile{lambda}}});
}

int PotentialSpec::degree() const noexcept { return terms_.empty() ? 0 : terms_.back().power; }

bool PotentialSpec::is_z_independent() const noexcept {
    return std::all_of(terms_.begin(), terms_.end(), [](const PotentialTerm &t) {
        return std::holds_alternative<ConstantProfile>(t.coefficient);
    });
}

FrozenPotential PotentialSpec::at(double z) const {
    std::vector<double> c(static_cast<std::size_t>(degree()) + 1, 0.0);
    for (const auto &t : terms_) c[static_cast<std::size_t>(t.power)] = eval_profile(t.coefficient, z);
    return FrozenPotential(std::move(c));
}

FrozenPotential::FrozenPotential(std::vector<double> coefficients) : c_(std::move(coefficients)) {
    if (c_.empty()) c_.push_back(0.0);
}

double FrozenPotential::value(double x) const noexcept {
    double acc = 0.0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
    return acc;
}

double FrozenPotential::gradient(double x) const noexcept {
    double acc = 0.0;
    for (std::size_t k = c_.size() - 1; k >= 1; --k) acc = acc * x + static_cast<double>(k) * c_[k];
    return acc;
}

double FrozenPotential::taylor_coefficient(double x, int j) const noexcept {
    const int deg = degree();
    if (j > deg) return 0.0;
    double acc = 0.0;
    for (int k = deg; k >= j; --k) acc = acc * x + binomial(k, j) * c_[static_cast<std::size_t>(k)];
    return acc;
}

double FrozenPotential::generator_remainder(double x, double y, double epsilon) const noexcept {
    const double a = 0.5 * epsilon * y;
    const double a2 = a * a;
    double acc = 0.0;
    double power = a2;  // a^(j-1)
    for (int j = 3; j <= degree(); j += 2) {
        acc += taylor_coefficient(x, j) * power;
        power *= a2;
    }
    return y * acc;
}

double FrozenPotential::generator(double x, double y, double epsilon, int max_order) const noexcept {
    const double first = gradient(x) * y;
    if (max_order == 1 || degree() < 3) return first;
    if (max_order < 0 || max_order >= degree()) return first + generator_remainder(x, y, epsilon);
    const double a = 0.5 * epsilon * y;
    const double a2 = a * a;
    double acc = 0.0;
    double power = a2;
    for (int j = 3; j <= max_order; j += 2) {
        acc += taylor_coefficient(x, j) * power;
        power *= a2;
    }
    return first + y * acc;
}

double eval_potential(const PotentialSpec &spec, double x, double z) { return spec.at(z).value(x); }

double eval_gradient(const PotentialSpec &spec, double x, double z) {
    return spec.at(z).gradient(x);
}

double moyal_generator(const PotentialSpec &spec, double x, double y, double z, double epsilon) {
    return spec.at(z).generator(x, y, epsilon);
}

double moyal_generator_truncated(const PotentialSpec &spec, double x, double y, double z,
                                 double epsilon, int max_order) {
    if (max_order < 1 || max_order % 2 == 0) {
        throw Error(ErrorKind::even_order,
                    "truncation order must be odd and >= 1, got " + std::to_string(max_order));
    }
    return spec.at(z).generator(x, y, epsilon, max_order);
}

}  // namespace qlbeam
