#include "skdv/grid.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <string>

namespace skdv {

namespace {

// The FFTW planner is not thread-safe; execution with new arrays is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct PlanDeleter {
  void operator()(fftw_plan_s* p) const {
    if (p) fftw_destroy_plan(p);
  }
};
using PlanHandle = std::unique_ptr<fftw_plan_s, PlanDeleter>;

PlanHandle make_plan(std::size_t n, int sign) {
  std::vector<cplx> a(n), b(n);
  std::lock_guard lock(planner_mutex());
  // ESTIMATE keeps plan selection, and therefore round-off, run-independent.
  fftw_plan p = fftw_plan_dft_1d(static_cast<int>(n), reinterpret_cast<fftw_complex*>(a.data()),
                                 reinterpret_cast<fftw_complex*>(b.data()), sign,
                                 FFTW_ESTIMATE | FFTW_UNALIGNED);
  if (!p) throw std::runtime_error("failed to create FFT plan");
  return PlanHandle(p);
}

void execute(const PlanHandle& plan, std::span<const cplx> in, std::span<cplx> out) {
  fftw_execute_dft(plan.get(),
                   reinterpret_cast<fftw_complex*>(const_cast<cplx*>(in.data())),
                   reinterpret_cast<fftw_complex*>(out.data()));
}

template <class T>
void require_finite(const Field<T>& f, const char* what) {
  if (!f.all_finite()) throw std::domain_error(std::string(what) + ": non-finite sample in input field");
}

template <class T>
void require_same_grid(std::span<const Field<T>> fs) {
  for (const auto& f : fs)
    if (f.grid_ptr() != fs.front().grid_ptr())
      throw std::invalid_argument("dealiased_product: factors live on different grids");
}

}  // namespace

struct SpectralGrid::Plans {
  PlanHandle fwd, inv, fwd_fine, inv_fine;
};

SpectralGrid::SpectralGrid(std::size_t num_points, double half_length)
    : n_(num_points), half_length_(half_length) {
  if (n_ < 4 || (n_ & (n_ - 1)) != 0)
    throw std::invalid_argument("grid size must be a power of two and at least 4");
  if (!(half_length > 0.0) || !std::isfinite(half_length))
    throw std::invalid_argument("half length must be positive and finite");
  dx_ = 2.0 * half_length_ / static_cast<double>(n_);
  x_.resize(n_);
  k_.resize(n_);
  const auto half = static_cast<std::ptrdiff_t>(n_ / 2);
  for (std::size_t j = 0; j < n_; ++j) {
    x_[j] = x(j);
    auto m = static_cast<std::ptrdiff_t>(j);
    if (m >= half) m -= static_cast<std::ptrdiff_t>(n_);
    k_[j] = std::numbers::pi * static_cast<double>(m) / half_length_;
  }
  plans_ = std::make_unique<Plans>();
  plans_->fwd = make_plan(n_, FFTW_FORWARD);
  plans_->inv = make_plan(n_, FFTW_BACKWARD);
  plans_->fwd_fine = make_plan(2 * n_, FFTW_FORWARD);
  plans_->inv_fine = make_plan(2 * n_, FFTW_BACKWARD);
}

SpectralGrid::~SpectralGrid() {
  if (!plans_) return;
  std::lock_guard lock(planner_mutex());
  plans_.reset();
}

std::shared_ptr<const SpectralGrid> SpectralGrid::make(std::size_t num_points, double half_length) {
  return std::make_shared<const SpectralGrid>(num_points, half_length);
}

double SpectralGrid::k_max() const { return std::numbers::pi * static_cast<double>(n_ / 2) / half_length_; }

void SpectralGrid::forward(std::span<const cplx> in, std::span<cplx> out) const {
  execute(plans_->fwd, in, out);
}

void SpectralGrid::inverse(std::span<const cplx> in, std::span<cplx> out) const {
  execute(plans_->inv, in, out);
  const double s = 1.0 / static_cast<double>(n_);
  for (auto& z : out) z *= s;
}

std::vector<cplx> SpectralGrid::to_fine(std::span<const cplx> coeffs) const {
  const std::size_t m = 2 * n_, h = n_ / 2;
  std::vector<cplx> padded(m, cplx{}), fine(m);
  // Factor 2 compensates the 1/(2N) normalization of the fine inverse.
  for (std::size_t j = 0; j < h; ++j) padded[j] = 2.0 * coeffs[j];
  for (std::size_t j = h + 1; j < n_; ++j) padded[j + n_] = 2.0 * coeffs[j];
  padded[h] = coeffs[h];
  padded[m - h] = coeffs[h];
  execute(plans_->inv_fine, padded, fine);
  const double s = 1.0 / static_cast<double>(m);
  for (auto& z : fine) z *= s;
  return fine;
}

std::vector<cplx> SpectralGrid::from_fine(std::span<const cplx> fine) const {
  const std::size_t m = 2 * n_, h = n_ / 2;
  std::vector<cplx> full(m), coeffs(n_);
  execute(plans_->fwd_fine, fine, full);
  for (std::size_t j = 0; j < h; ++j) coeffs[j] = 0.5 * full[j];
  for (std::size_t j = h + 1; j < n_; ++j) coeffs[j] = 0.5 * full[j + n_];
  coeffs[h] = 0.5 * (full[h] + full[m - h]);
  return coeffs;
}

template <class T>
bool Field<T>::all_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](const T& z) {
    if constexpr (std::is_same_v<T, double>)
      return std::isfinite(z);
    else
      return std::isfinite(z.real()) && std::isfinite(z.imag());
  });
}

template class Field<double>;
template class Field<cplx>;

std::vector<cplx> spectrum(const RealField& f) {
  std::vector<cplx> in(f.values().begin(), f.values().end()), out(f.size());
  f.grid().forward(in, out);
  return out;
}

std::vector<cplx> spectrum(const ComplexField& f) {
  std::vector<cplx> out(f.size());
  f.grid().forward(f.samples(), out);
  return out;
}

ComplexField complex_from_spectrum(const GridPtr& grid, std::span<const cplx> coeffs) {
  std::vector<cplx> out(grid->size());
  grid->inverse(coeffs, out);
  return ComplexField(grid, std::move(out));
}

RealField real_from_spectrum(const GridPtr& grid, std::span<const cplx> coeffs) {
  std::vector<cplx> out(grid->size());
  grid->inverse(coeffs, out);
  std::vector<double> re(out.size());
  std::transform(out.begin(), out.end(), re.begin(), [](cplx z) { return z.real(); });
  return RealField(grid, std::move(re));
}

void apply_derivative(const SpectralGrid& grid, std::span<cplx> coeffs, int order) {
  if (order < 1 || order > 3) throw std::invalid_argument("derivative order must be 1, 2 or 3");
  const auto k = grid.wavenumbers();
  for (std::size_t j = 0; j < coeffs.size(); ++j) {
    const cplx ik{0.0, k[j]};
    cplx mult = ik;
    for (int p = 1; p < order; ++p) mult *= ik;
    coeffs[j] *= mult;
  }
  if (order % 2 == 1) coeffs[grid.nyquist_index()] = 0.0;
}

RealField derivative(const RealField& f, int order) {
  require_finite(f, "derivative");
  auto c = spectrum(f);
  apply_derivative(f.grid(), c, order);
  return real_from_spectrum(f.grid_ptr(), c);
}

ComplexField derivative(const ComplexField& f, int order) {
  require_finite(f, "derivative");
  auto c = spectrum(f);
  apply_derivative(f.grid(), c, order);
  return complex_from_spectrum(f.grid_ptr(), c);
}

namespace {

template <class T>
std::vector<cplx> fine_product(std::span<const Field<T>> factors) {
  if (factors.size() < 2 || factors.size() > 3)
    throw std::invalid_argument("dealiased_product takes 2 or 3 factors");
  require_same_grid(factors);
  const auto& grid = factors.front().grid();
  std::vector<cplx> prod;
  for (const auto& f : factors) {
    auto fine = grid.to_fine(spectrum(f));
    if (prod.empty()) {
      prod = std::move(fine);
    } else {
      for (std::size_t j = 0; j < prod.size(); ++j) prod[j] *= fine[j];
    }
  }
  return grid.from_fine(prod);
}

}  // namespace

RealField dealiased_product(std::span<const RealField> factors) {
  auto c = fine_product(factors);
  return real_from_spectrum(factors.front().grid_ptr(), c);
}

ComplexField dealiased_product(std::span<const ComplexField> factors) {
  auto c = fine_product(factors);
  return complex_from_spectrum(factors.front().grid_ptr(), c);
}

double integrate(const RealField& f) {
  require_finite(f, "integrate");
  double s = 0.0;
  for (double a : f.samples()) s += a;
  return s * f.grid().dx();
}

cplx integrate(const ComplexField& f) {
  require_finite(f, "integrate");
  cplx s{};
  for (cplx a : f.samples()) s += a;
  return s * f.grid().dx();
}

double parseval_norm_sq(const SpectralGrid& grid, std::span<const cplx> coeffs) {
  double s = 0.0;
  for (cplx c : coeffs) s += std::norm(c);
  return s * grid.dx() / static_cast<double>(grid.size());
}

ComplexField to_complex(const RealField& f) {
  return ComplexField(f.grid_ptr(), std::vector<cplx>(f.values().begin(), f.values().end()));
}

ComplexField conj(const ComplexField& f) {
  std::vector<cplx> out(f.size());
  std::transform(f.values().begin(), f.values().end(), out.begin(), [](cplx z) { return std::conj(z); });
  return ComplexField(f.grid_ptr(), std::move(out));
}

namespace {
template <class Op>
RealField map_real(const ComplexField& f, Op op) {
  std::vector<double> out(f.size());
  std::transform(f.values().begin(), f.values().end(), out.begin(), op);
  return RealField(f.grid_ptr(), std::move(out));
}
}  // namespace

RealField real_part(const ComplexField& f) { return map_real(f, [](cplx z) { return z.real(); }); }
RealField imag_part(const ComplexField& f) { return map_real(f, [](cplx z) { return z.imag(); }); }
RealField abs_sq(const ComplexField& f) { return map_real(f, [](cplx z) { return std::norm(z); }); }

double l2_norm_sq(const RealField& f) {
  double s = 0.0;
  for (double a : f.samples()) s += a * a;
  return s * f.grid().dx();
}

double l2_norm_sq(const ComplexField& f) {
  double s = 0.0;
  for (cplx a : f.samples()) s += std::norm(a);
  return s * f.grid().dx();
}

double max_abs(const RealField& f) {
  double m = 0.0;
  for (double a : f.samples()) m = std::max(m, std::abs(a));
  return m;
}

double max_abs(const ComplexField& f) {
  double m = 0.0;
  for (cplx a : f.samples()) m = std::max(m, std::abs(a));
  return m;
}

}  // namespace skdv
