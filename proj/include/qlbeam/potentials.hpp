#pragma once

#include <span>
#include <variant>
#include <vector>

namespace qlbeam {

struct ConstantProfile {
    double value;
};

/// Piecewise-constant coefficient repeating with period sum(lengths): a lattice
/// of elements starting at z_origin.
struct LatticeProfile {
    std::vector<double> lengths;
    std::vector<double> values;
    double z_origin = 0.0;
};

/// amplitude * cos(omega z + phase)
struct HarmonicProfile {
    double amplitude;
    double omega;
    double phase = 0.0;
};

using CoefficientProfile = std::variant<ConstantProfile, LatticeProfile, HarmonicProfile>;

double eval_profile(const CoefficientProfile &profile, double z);

struct PotentialTerm {
    int power;
    CoefficientProfile coefficient;
};

class FrozenPotential;

/// U(x, z) = sum_k c_k(z) x^k.
class PotentialSpec {
  public:
    PotentialSpec() = default;
    /// Throws Error(invalid_argument) on negative or repeated powers and
    /// malformed lattices.
    explicit PotentialSpec(std::vector<PotentialTerm> terms);

    static PotentialSpec free_space();
    /// U = K x^2 / 2.
    static PotentialSpec linear_lens(double K);
    /// U = K x^2 / 2 + lambda x^4.
    static PotentialSpec quartic(double K, double lambda);

    const std::vector<PotentialTerm> &terms() const noexcept { return terms_; }
    int degree() const noexcept;
    bool is_z_independent() const noexcept;

    /// Polynomial with its coefficients sampled at z.
    FrozenPotential at(double z) const;

  private:
    std::vector<PotentialTerm> terms_;
};

/// The potential at a fixed z, as a dense coefficient list (index = power).
class FrozenPotential {
  public:
    explicit FrozenPotential(std::vector<double> coefficients);

    int degree() const noexcept { return static_cast<int>(c_.size()) - 1; }
    std::span<const double> coefficients() const noexcept { return c_; }

    double value(double x) const noexcept;
    double gradient(double x) const noexcept;
    /// U^(j)(x) / j!
    double taylor_coefficient(double x, int j) const noexcept;

    /// Moyal generator [U(x + eps y/2) - U(x - eps y/2)] / eps, expanded in
    /// odd powers of eps y / 2. max_order < 0 keeps every term (exact for a
    /// polynomial); max_order = 1 gives gradient(x) * y exactly.
    double generator(double x, double y, double epsilon, int max_order = -1) const noexcept;
    /// Full generator minus its first-order truncation, computed without cancellation.
    double generator_remainder(double x, double y, double epsilon) const noexcept;

  private:
    std::vector<double> c_;
};

double eval_potential(const PotentialSpec &spec, double x, double z);
double eval_gradient(const PotentialSpec &spec, double x, double z);
double moyal_generator(const PotentialSpec &spec, double x, double y, double z, double epsilon);
/// Throws Error(even_order) unless max_order is odd and >= 1.
double moyal_generator_truncated(const PotentialSpec &spec, double x, double y, double z,
                                 double epsilon, int max_order);

}  // namespace qlbeam
