#include "coherence/states.hpp"

#include <cmath>
#include <functional>
#include <numeric>
#include <sstream>

namespace coherence {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

ComplexMatrix ginibre(int rows, int cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexMatrix g(rows, cols);
  // Column-major fill order is part of the reproducibility contract.
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(i, j) = Complex(re, im);
    }
  return g;
}

}  // namespace

Rng derive_rng(std::uint64_t seed, std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  std::uint64_t h = splitmix64(seed);
  h = splitmix64(h ^ a);
  h = splitmix64(h ^ b);
  h = splitmix64(h ^ c);
  return Rng(h);
}

PureState::PureState(ComplexVector amplitudes) : amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.size() == 0) throw StateError("pure state needs at least one amplitude");
  if (!amplitudes_.allFinite()) throw StateError("pure state has a non-finite amplitude");
  if (std::abs(amplitudes_.norm() - 1.0) > 1e-12) {
    std::ostringstream os;
    os << "pure state is not normalized: norm = " << amplitudes_.norm();
    throw StateError(os.str());
  }
}

PureState PureState::normalized(ComplexVector amplitudes) {
  const double norm = amplitudes.norm();
  if (!(norm > 0.0) || !std::isfinite(norm))
    throw StateError("cannot normalize a zero or non-finite vector");
  amplitudes /= norm;
  return PureState(std::move(amplitudes));
}

DensityMatrix::DensityMatrix(const ComplexMatrix& mat, std::vector<int> dims)
    : dims_(std::move(dims)) {
  if (mat.rows() != mat.cols() || mat.rows() == 0)
    throw StateError("density matrix must be square and non-empty");
  if (!all_finite(mat)) throw StateError("density matrix has a non-finite entry");
  if (!dims_.empty()) {
    const long total = std::accumulate(dims_.begin(), dims_.end(), 1L, std::multiplies<>());
    if (total != mat.rows() || std::any_of(dims_.begin(), dims_.end(), [](int d) { return d < 1; }))
      throw StateError("subsystem dimensions do not factor the matrix size");
  }
  if (!is_hermitian(mat)) {
    std::ostringstream os;
    os << "density matrix is not Hermitian (deviation " << hermiticity_deviation(mat) << ")";
    throw StateError(os.str());
  }
  mat_ = hermitian_part(mat);
  const double tr = mat_.trace().real();
  if (std::abs(tr - 1.0) > kTraceTolerance) {
    std::ostringstream os;
    os.precision(17);
    os << "density matrix trace is " << tr << ", expected 1";
    throw StateError(os.str());
  }
  const double min_eig = hermitian_eigenvalues(mat_)(0);
  if (min_eig < -kPsdTolerance) {
    std::ostringstream os;
    os << "density matrix is not positive semidefinite (min eigenvalue " << min_eig << ")";
    throw StateError(os.str());
  }
}

DensityMatrix::DensityMatrix(const PureState& psi, std::vector<int> dims)
    : DensityMatrix(psi.projector(), std::move(dims)) {}

DensityMatrix DensityMatrix::reduced(int keep) const {
  if (dims_.empty()) throw StateError("state has no subsystem structure");
  const ComplexMatrix r = partial_trace(mat_, dims_, keep);
  return DensityMatrix(r, {static_cast<int>(r.rows())});
}

double SigmaFamilyParams::k_max(int n) { return 1.0 / (std::ldexp(1.0, n) - 1.0); }

void SigmaFamilyParams::validate() const {
  if (n < 1 || n > 10) throw StateError("sigma family: qubit count must be in [1, 10]");
  if (!(k >= 0.0) || k > k_max(n) * (1.0 + 1e-12)) {
    std::ostringstream os;
    os << "sigma family: k = " << k << " outside [0, " << k_max(n) << "] for n = " << n;
    throw StateError(os.str());
  }
}

PureState maximally_coherent(int d) {
  if (d < 1) throw StateError("dimension must be positive");
  return PureState(ComplexVector::Constant(d, Complex(1.0 / std::sqrt(double(d)), 0.0)));
}

PureState maximally_entangled_two_qubit() {
  ComplexVector v = ComplexVector::Zero(4);
  v(0) = v(3) = 1.0 / std::sqrt(2.0);
  return PureState(std::move(v));
}

DensityMatrix sigma_family(const SigmaFamilyParams& params) {
  params.validate();
  const int d = 1 << params.n;
  const double inv_d = 1.0 / d;
  ComplexMatrix m = ComplexMatrix::Constant(d, d, Complex(-params.k * inv_d, 0.0));
  m.diagonal().setConstant(Complex((1.0 + params.k) * inv_d - params.k * inv_d, 0.0));
  return DensityMatrix(m, std::vector<int>(params.n, 2));
}

DensityMatrix reduced_qubit_of_sigma(const SigmaFamilyParams& params) {
  params.validate();
  ComplexMatrix m(2, 2);
  m << 0.5, -params.k / 2.0, -params.k / 2.0, 0.5;
  return DensityMatrix(m, {2});
}

DensityMatrix mix_with_pure(const DensityMatrix& sigma, const PureState& phi, double p) {
  if (phi.dim() != sigma.dim()) throw StateError("mix_with_pure: dimension mismatch");
  if (!(p >= 0.0 && p <= 1.0)) throw StateError("mix_with_pure: weight must lie in [0, 1]");
  return DensityMatrix((1.0 - p) * sigma.matrix() + p * phi.projector(), sigma.dims());
}

PureState haar_random_pure(int d, Rng& rng) {
  if (d < 1) throw StateError("dimension must be positive");
  return PureState::normalized(ginibre(d, 1, rng).col(0));
}

DensityMatrix random_density(int d, int rank, Rng& rng) {
  if (d < 1 || rank < 1 || rank > d) throw StateError("random_density: need 1 <= rank <= d");
  const ComplexMatrix g = ginibre(d, rank, rng);
  ComplexMatrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return DensityMatrix(rho);
}

DensityMatrix dephase(const DensityMatrix& rho) {
  ComplexMatrix diag = ComplexMatrix::Zero(rho.dim(), rho.dim());
  diag.diagonal() = rho.matrix().diagonal().real().cast<Complex>();
  return DensityMatrix(diag, rho.dims());
}

RealVector random_probability_vector(int d, Rng& rng) {
  std::exponential_distribution<double> expo(1.0);
  RealVector p(d);
  for (int i = 0; i < d; ++i) p(i) = expo(rng);
  return p / p.sum();
}

void to_json(nlohmann::json& j, const DensityMatrix& rho) {
  const int d = rho.dim();
  std::vector<double> re, im;
  re.reserve(d * d);
  im.reserve(d * d);
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) {
      re.push_back(rho.matrix()(r, c).real());
      im.push_back(rho.matrix()(r, c).imag());
    }
  j = nlohmann::json{{"dims", rho.dims()}, {"re", re}, {"im", im}};
}

DensityMatrix density_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("re")) throw StateError("state JSON needs a \"re\" array");
  std::vector<double> re, im;
  std::vector<int> dims;
  try {
    re = j.at("re").get<std::vector<double>>();
    if (j.contains("im")) im = j.at("im").get<std::vector<double>>();
    if (j.contains("dims")) dims = j.at("dims").get<std::vector<int>>();
  } catch (const nlohmann::json::exception& e) {
    throw StateError(std::string("malformed state JSON: ") + e.what());
  }
  if (im.empty()) im.assign(re.size(), 0.0);
  if (im.size() != re.size()) throw StateError("state JSON: re and im lengths differ");
  const auto d = static_cast<long>(std::llround(std::sqrt(double(re.size()))));
  if (d * d != static_cast<long>(re.size()) || d == 0)
    throw StateError("state JSON: entry count is not a perfect square");
  ComplexMatrix m(d, d);
  for (long r = 0; r < d; ++r)
    for (long c = 0; c < d; ++c) m(r, c) = Complex(re[r * d + c], im[r * d + c]);
  return DensityMatrix(m, std::move(dims));
}

}  // namespace coherence
