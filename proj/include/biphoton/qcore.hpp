#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace biphoton {

using complexd = std::complex<double>;

/// Tolerance for analytic (round-off only) comparisons.
inline constexpr double kAnalyticTol = 1e-12;
/// Tolerance for derived-phase comparisons modulo 2pi.
inline constexpr double kPhaseTol = 1e-9;
/// Slack for eigenvalue positivity checks.
inline constexpr double kEigenvalueSlack = 1e-10;

enum class Subsystem { A, B };

/// Ordered set of mode labels. A composite basis built with `product`
/// remembers its two factors so density matrices over it can be
/// partially traced. Composite label order is A-index major.
class ModeBasis {
  public:
    explicit ModeBasis(std::vector<std::string> labels);

    static ModeBasis product(const ModeBasis& a, const ModeBasis& b);

    std::size_t size() const { return labels_.size(); }
    const std::vector<std::string>& labels() const { return labels_; }
    const std::string& label(std::size_t i) const { return labels_[i]; }

    /// Index of `label`; throws std::invalid_argument if absent.
    std::size_t index_of(std::string_view label) const;
    bool contains(std::string_view label) const;

    bool is_composite() const { return left_ != nullptr; }
    const ModeBasis& factor(Subsystem which) const;

    friend bool operator==(const ModeBasis& lhs, const ModeBasis& rhs) {
        return lhs.labels_ == rhs.labels_;
    }

  private:
    std::vector<std::string> labels_;
    std::shared_ptr<const ModeBasis> left_;
    std::shared_ptr<const ModeBasis> right_;
};

/// Normalized complex amplitudes over a mode basis. The constructor
/// rejects unnormalized input; use `normalized` to rescale explicitly.
class StateVector {
  public:
    StateVector(ModeBasis basis, std::vector<complexd> amplitudes);

    /// Rescales `amplitudes` to unit norm. Throws on the zero vector.
    static StateVector normalized(ModeBasis basis,
                                  std::vector<complexd> amplitudes);
    /// Unit amplitude on `label`, zero elsewhere.
    static StateVector basis_state(ModeBasis basis, std::string_view label);

    const ModeBasis& basis() const { return basis_; }
    const std::vector<complexd>& amplitudes() const { return amps_; }
    complexd amplitude(std::string_view label) const;
    std::size_t dim() const { return amps_.size(); }
    double norm() const;

  private:
    struct unchecked_t {};
    StateVector(unchecked_t, ModeBasis basis, std::vector<complexd> amps);

    ModeBasis basis_;
    std::vector<complexd> amps_;
};

/// Complex square matrix acting on a mode basis, row-major storage.
class Operator {
  public:
    Operator(ModeBasis basis, std::vector<complexd> matrix);

    static Operator identity(ModeBasis basis);

    const ModeBasis& basis() const { return basis_; }
    const std::vector<complexd>& matrix() const { return m_; }
    std::size_t dim() const { return basis_.size(); }
    complexd entry(std::size_t row, std::size_t col) const {
        return m_[row * dim() + col];
    }

    Operator adjoint() const;
    /// Max entry of |U†U - I| below `tol`.
    bool is_unitary(double tol = kAnalyticTol) const;

  private:
    ModeBasis basis_;
    std::vector<complexd> m_;
};

/// Hermitian, unit-trace, positive-semidefinite matrix over a mode
/// basis. All three properties are enforced at construction.
class DensityMatrix {
  public:
    DensityMatrix(ModeBasis basis, std::vector<complexd> matrix);

    const ModeBasis& basis() const { return basis_; }
    const std::vector<complexd>& matrix() const { return m_; }
    std::size_t dim() const { return basis_.size(); }
    complexd entry(std::size_t row, std::size_t col) const {
        return m_[row * dim() + col];
    }

    /// tr(rho^2); 1 for pure states, 1/dim for the maximal mixture.
    double purity() const;
    /// Ascending eigenvalues (real; the matrix is Hermitian).
    std::vector<double> eigenvalues() const;

  private:
    ModeBasis basis_;
    std::vector<complexd> m_;
};

/// Kronecker product of states over label-disjoint bases, A-major order.
StateVector tensor(const StateVector& a, const StateVector& b);

/// Matrix-vector product; bases must match.
StateVector apply(const Operator& op, const StateVector& s);

/// Raw matrix-vector product without normalization checks. Used where a
/// pipeline legitimately carries an unnormalized remainder (absorption).
std::vector<complexd> apply_raw(const Operator& op,
                                const std::vector<complexd>& amps);

/// Matrix product lhs * rhs (lhs applied after rhs).
Operator multiply(const Operator& lhs, const Operator& rhs);

DensityMatrix density_from_pure(const StateVector& s);

/// Reduced density matrix for the kept subsystem of a composite basis.
DensityMatrix partial_trace(const DensityMatrix& rho, Subsystem keep);

/// Born-rule probabilities aligned with the basis label order.
std::vector<double> probabilities(const StateVector& s);

/// Ascending eigenvalues of a Hermitian matrix (row-major, dim x dim).
std::vector<double> hermitian_eigenvalues(const std::vector<complexd>& m,
                                          std::size_t dim);

}  // namespace biphoton
