#include "biphoton/qcore.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <unordered_set>

namespace biphoton {

namespace {

std::string join(const std::vector<std::string>& parts,
                 std::string_view sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i != 0) out += sep;
        out += parts[i];
    }
    return out;
}

}  // namespace

ModeBasis::ModeBasis(std::vector<std::string> labels)
    : labels_(std::move(labels)) {
    if (labels_.empty())
        throw std::invalid_argument("mode basis must have at least one label");
    std::unordered_set<std::string_view> seen;
    for (const auto& l : labels_) {
        if (l.empty())
            throw std::invalid_argument("mode labels must be non-empty");
        if (!seen.insert(l).second)
            throw std::invalid_argument("duplicate mode label '" + l + "'");
    }
}

ModeBasis ModeBasis::product(const ModeBasis& a, const ModeBasis& b) {
    for (const auto& l : a.labels_)
        if (b.contains(l))
            throw std::invalid_argument(
                "overlapping mode label '" + l + "' between subsystems");
    std::vector<std::string> labels;
    labels.reserve(a.size() * b.size());
    for (const auto& la : a.labels_)
        for (const auto& lb : b.labels_) labels.push_back(la + lb);
    ModeBasis out(std::move(labels));
    out.left_ = std::make_shared<const ModeBasis>(a);
    out.right_ = std::make_shared<const ModeBasis>(b);
    return out;
}

std::size_t ModeBasis::index_of(std::string_view label) const {
    for (std::size_t i = 0; i < labels_.size(); ++i)
        if (labels_[i] == label) return i;
    throw std::invalid_argument("unknown mode label '" + std::string(label) +
                                "' in basis {" + join(labels_, ",") + "}");
}

bool ModeBasis::contains(std::string_view label) const {
    return std::any_of(labels_.begin(), labels_.end(),
                       [&](const std::string& l) { return l == label; });
}

const ModeBasis& ModeBasis::factor(Subsystem which) const {
    if (!is_composite())
        throw std::invalid_argument("basis is not a composite product basis");
    return which == Subsystem::A ? *left_ : *right_;
}

StateVector::StateVector(ModeBasis basis, std::vector<complexd> amplitudes)
    : basis_(std::move(basis)), amps_(std::move(amplitudes)) {
    if (amps_.size() != basis_.size())
        throw std::invalid_argument("amplitude count does not match basis size");
    const double n = norm();
    if (std::abs(n - 1.0) > kAnalyticTol)
        throw std::invalid_argument(
            "state vector is not normalized (norm = " + std::to_string(n) +
            "); use StateVector::normalized to rescale");
}

StateVector::StateVector(unchecked_t, ModeBasis basis,
                         std::vector<complexd> amps)
    : basis_(std::move(basis)), amps_(std::move(amps)) {}

StateVector StateVector::normalized(ModeBasis basis,
                                    std::vector<complexd> amplitudes) {
    if (amplitudes.size() != basis.size())
        throw std::invalid_argument("amplitude count does not match basis size");
    double sq = 0.0;
    for (const auto& a : amplitudes) sq += std::norm(a);
    if (sq <= 0.0)
        throw std::invalid_argument("cannot normalize the zero vector");
    const double inv = 1.0 / std::sqrt(sq);
    for (auto& a : amplitudes) a *= inv;
    return StateVector(unchecked_t{}, std::move(basis), std::move(amplitudes));
}

StateVector StateVector::basis_state(ModeBasis basis, std::string_view label) {
    std::vector<complexd> amps(basis.size(), complexd(0.0, 0.0));
    amps[basis.index_of(label)] = complexd(1.0, 0.0);
    return StateVector(unchecked_t{}, std::move(basis), std::move(amps));
}

complexd StateVector::amplitude(std::string_view label) const {
    return amps_[basis_.index_of(label)];
}

double StateVector::norm() const {
    double sq = 0.0;
    for (const auto& a : amps_) sq += std::norm(a);
    return std::sqrt(sq);
}

Operator::Operator(ModeBasis basis, std::vector<complexd> matrix)
    : basis_(std::move(basis)), m_(std::move(matrix)) {
    const std::size_t d = basis_.size();
    if (m_.size() != d * d)
        throw std::invalid_argument("operator matrix is not square over basis");
}

Operator Operator::identity(ModeBasis basis) {
    const std::size_t d = basis.size();
    std::vector<complexd> m(d * d, complexd(0.0, 0.0));
    for (std::size_t i = 0; i < d; ++i) m[i * d + i] = complexd(1.0, 0.0);
    return Operator(std::move(basis), std::move(m));
}

Operator Operator::adjoint() const {
    const std::size_t d = dim();
    std::vector<complexd> m(d * d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
            m[j * d + i] = std::conj(m_[i * d + j]);
    return Operator(basis_, std::move(m));
}

bool Operator::is_unitary(double tol) const {
    const std::size_t d = dim();
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            complexd sum(0.0, 0.0);
            for (std::size_t k = 0; k < d; ++k)
                sum += std::conj(m_[k * d + i]) * m_[k * d + j];
            const complexd want = i == j ? complexd(1.0, 0.0) : complexd(0.0, 0.0);
            if (std::abs(sum - want) > tol) return false;
        }
    }
    return true;
}

DensityMatrix::DensityMatrix(ModeBasis basis, std::vector<complexd> matrix)
    : basis_(std::move(basis)), m_(std::move(matrix)) {
    const std::size_t d = basis_.size();
    if (m_.size() != d * d)
        throw std::invalid_argument("density matrix is not square over basis");
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
            if (std::abs(m_[i * d + j] - std::conj(m_[j * d + i])) > kAnalyticTol)
                throw std::invalid_argument("density matrix is not Hermitian");
    complexd tr(0.0, 0.0);
    for (std::size_t i = 0; i < d; ++i) tr += m_[i * d + i];
    if (std::abs(tr - complexd(1.0, 0.0)) > kAnalyticTol)
        throw std::invalid_argument("density matrix trace is not 1");
    const auto eig = eigenvalues();
    if (!eig.empty() && eig.front() < -kEigenvalueSlack)
        throw std::invalid_argument("density matrix has a negative eigenvalue");
    const double p = purity();
    if (p < 1.0 / static_cast<double>(d) - kEigenvalueSlack ||
        p > 1.0 + kEigenvalueSlack)
        throw std::invalid_argument("density matrix purity is out of range");
}

double DensityMatrix::purity() const {
    const std::size_t d = dim();
    // tr(rho^2) = sum_ij rho_ij * rho_ji = sum_ij |rho_ij|^2 for Hermitian rho.
    double p = 0.0;
    for (std::size_t i = 0; i < d * d; ++i) p += std::norm(m_[i]);
    return p;
}

std::vector<double> DensityMatrix::eigenvalues() const {
    return hermitian_eigenvalues(m_, dim());
}

StateVector tensor(const StateVector& a, const StateVector& b) {
    ModeBasis basis = ModeBasis::product(a.basis(), b.basis());
    std::vector<complexd> amps;
    amps.reserve(a.dim() * b.dim());
    for (const auto& xa : a.amplitudes())
        for (const auto& xb : b.amplitudes()) amps.push_back(xa * xb);
    return StateVector(std::move(basis), std::move(amps));
}

StateVector apply(const Operator& op, const StateVector& s) {
    if (!(op.basis() == s.basis()))
        throw std::invalid_argument("operator/state basis mismatch");
    return StateVector(s.basis(), apply_raw(op, s.amplitudes()));
}

std::vector<complexd> apply_raw(const Operator& op,
                                const std::vector<complexd>& amps) {
    const std::size_t d = op.dim();
    if (amps.size() != d)
        throw std::invalid_argument("operator/vector dimension mismatch");
    const auto& m = op.matrix();
    std::vector<complexd> out(d, complexd(0.0, 0.0));
    for (std::size_t i = 0; i < d; ++i) {
        complexd sum(0.0, 0.0);
        for (std::size_t j = 0; j < d; ++j) sum += m[i * d + j] * amps[j];
        out[i] = sum;
    }
    return out;
}

Operator multiply(const Operator& lhs, const Operator& rhs) {
    if (!(lhs.basis() == rhs.basis()))
        throw std::invalid_argument("operator basis mismatch in product");
    const std::size_t d = lhs.dim();
    const auto& a = lhs.matrix();
    const auto& b = rhs.matrix();
    std::vector<complexd> m(d * d, complexd(0.0, 0.0));
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t k = 0; k < d; ++k) {
            const complexd aik = a[i * d + k];
            if (aik == complexd(0.0, 0.0)) continue;
            for (std::size_t j = 0; j < d; ++j)
                m[i * d + j] += aik * b[k * d + j];
        }
    return Operator(lhs.basis(), std::move(m));
}

DensityMatrix density_from_pure(const StateVector& s) {
    const std::size_t d = s.dim();
    const auto& a = s.amplitudes();
    std::vector<complexd> m(d * d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
            m[i * d + j] = a[i] * std::conj(a[j]);
    return DensityMatrix(s.basis(), std::move(m));
}

DensityMatrix partial_trace(const DensityMatrix& rho, Subsystem keep) {
    const ModeBasis& basis = rho.basis();
    if (!basis.is_composite())
        throw std::invalid_argument(
            "partial trace requires a composite product basis");
    const ModeBasis& ba = basis.factor(Subsystem::A);
    const ModeBasis& bb = basis.factor(Subsystem::B);
    const std::size_t da = ba.size();
    const std::size_t db = bb.size();
    const std::size_t d = basis.size();
    const auto& m = rho.matrix();
    if (keep == Subsystem::A) {
        std::vector<complexd> out(da * da, complexd(0.0, 0.0));
        for (std::size_t i = 0; i < da; ++i)
            for (std::size_t k = 0; k < da; ++k)
                for (std::size_t j = 0; j < db; ++j)
                    out[i * da + k] += m[(i * db + j) * d + (k * db + j)];
        return DensityMatrix(ba, std::move(out));
    }
    std::vector<complexd> out(db * db, complexd(0.0, 0.0));
    for (std::size_t j = 0; j < db; ++j)
        for (std::size_t l = 0; l < db; ++l)
            for (std::size_t i = 0; i < da; ++i)
                out[j * db + l] += m[(i * db + j) * d + (i * db + l)];
    return DensityMatrix(bb, std::move(out));
}

std::vector<double> probabilities(const StateVector& s) {
    std::vector<double> p;
    p.reserve(s.dim());
    for (const auto& a : s.amplitudes()) p.push_back(std::norm(a));
    return p;
}

// Eigenvalues of a Hermitian matrix H = B + iC via the real symmetric
// embedding [[B, -C], [C, B]], whose spectrum is that of H doubled.
// The 2d x 2d real problem is solved with cyclic Jacobi sweeps.
std::vector<double> hermitian_eigenvalues(const std::vector<complexd>& m,
                                          std::size_t dim) {
    if (m.size() != dim * dim)
        throw std::invalid_argument("matrix size does not match dimension");
    const std::size_t n = 2 * dim;
    std::vector<double> a(n * n, 0.0);
    for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t j = 0; j < dim; ++j) {
            const double re = m[i * dim + j].real();
            const double im = m[i * dim + j].imag();
            a[i * n + j] = re;
            a[(i + dim) * n + (j + dim)] = re;
            a[i * n + (j + dim)] = -im;
            a[(i + dim) * n + j] = im;
        }
    }

    constexpr int kMaxSweeps = 64;
    constexpr double kOffTol = 1e-30;  // squared off-diagonal mass
    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off += a[p * n + q] * a[p * n + q];
        if (off < kOffTol) break;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a[p * n + q];
                if (apq == 0.0) continue;
                const double app = a[p * n + p];
                const double aqq = a[q * n + q];
                const double tau = (aqq - app) / (2.0 * apq);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a[k * n + p];
                    const double akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a[p * n + k];
                    const double aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
            }
        }
    }

    std::vector<double> diag(n);
    for (std::size_t i = 0; i < n; ++i) diag[i] = a[i * n + i];
    std::sort(diag.begin(), diag.end());
    // Each eigenvalue of H appears twice in the embedding.
    std::vector<double> eig(dim);
    for (std::size_t i = 0; i < dim; ++i)
        eig[i] = 0.5 * (diag[2 * i] + diag[2 * i + 1]);
    return eig;
}

}  // namespace biphoton
