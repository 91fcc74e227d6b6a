#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <stdexcept>
#include <vector>

namespace skdv {

using cplx = std::complex<double>;

// Periodic grid on [-L, L) with N points and FFT-ordered wavenumbers.
// Holds the transform plans for N and 2N points; plans are shared read-only.
class SpectralGrid {
 public:
  SpectralGrid(std::size_t num_points, double half_length);
  ~SpectralGrid();
  SpectralGrid(const SpectralGrid&) = delete;
  SpectralGrid& operator=(const SpectralGrid&) = delete;

  static std::shared_ptr<const SpectralGrid> make(std::size_t num_points,
                                                  double half_length);

  std::size_t size() const { return n_; }
  double half_length() const { return half_length_; }
  double length() const { return 2.0 * half_length_; }
  double dx() const { return dx_; }
  double x(std::size_t j) const { return -half_length_ + dx_ * static_cast<double>(j); }
  std::span<const double> coordinates() const { return x_; }
  std::span<const double> wavenumbers() const { return k_; }
  double k_max() const;
  std::size_t nyquist_index() const { return n_ / 2; }

  // Unnormalized forward transform and normalized (1/N) inverse.
  void forward(std::span<const cplx> in, std::span<cplx> out) const;
  void inverse(std::span<const cplx> in, std::span<cplx> out) const;

  // Coefficients on N modes -> samples on the 2N-point grid of the same box.
  std::vector<cplx> to_fine(std::span<const cplx> coeffs) const;
  // Samples on the 2N-point grid -> coefficients on N modes (truncation).
  std::vector<cplx> from_fine(std::span<const cplx> fine) const;

 private:
  struct Plans;
  std::size_t n_;
  double half_length_;
  double dx_;
  std::vector<double> x_;
  std::vector<double> k_;
  std::unique_ptr<Plans> plans_;
};

using GridPtr = std::shared_ptr<const SpectralGrid>;

template <class T>
class Field {
 public:
  using value_type = T;

  explicit Field(GridPtr grid) : grid_(std::move(grid)), data_(checked(grid_).size()) {}
  Field(GridPtr grid, std::vector<T> samples)
      : grid_(std::move(grid)), data_(std::move(samples)) {
    if (data_.size() != checked(grid_).size())
      throw std::invalid_argument("field length does not match grid");
  }

  const SpectralGrid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  std::size_t size() const { return data_.size(); }
  std::span<const T> samples() const { return data_; }
  std::span<T> samples() { return data_; }
  const std::vector<T>& values() const { return data_; }
  T operator[](std::size_t j) const { return data_[j]; }
  T& operator[](std::size_t j) { return data_[j]; }

  bool all_finite() const;
  bool same_grid(const Field<double>& o) const { return grid_ == o.grid_ptr(); }
  bool same_grid(const Field<cplx>& o) const { return grid_ == o.grid_ptr(); }

 private:
  static const SpectralGrid& checked(const GridPtr& g) {
    if (!g) throw std::invalid_argument("field requires a grid");
    return *g;
  }
  GridPtr grid_;
  std::vector<T> data_;
};

using RealField = Field<double>;
using ComplexField = Field<cplx>;

// Forward coefficients (unnormalized) of a field.
std::vector<cplx> spectrum(const RealField& f);
std::vector<cplx> spectrum(const ComplexField& f);
ComplexField complex_from_spectrum(const GridPtr& grid, std::span<const cplx> coeffs);
// Discards the imaginary part left by round-off.
RealField real_from_spectrum(const GridPtr& grid, std::span<const cplx> coeffs);

// Multiplies coefficients in place by (ik)^order; odd orders zero the Nyquist mode.
void apply_derivative(const SpectralGrid& grid, std::span<cplx> coeffs, int order);

RealField derivative(const RealField& f, int order);
ComplexField derivative(const ComplexField& f, int order);

// Product of 2 or 3 factors, formed on the 2N grid and truncated back to N modes.
RealField dealiased_product(std::span<const RealField> factors);
ComplexField dealiased_product(std::span<const ComplexField> factors);

double integrate(const RealField& f);
cplx integrate(const ComplexField& f);

// dx * sum |f|^2 computed from the coefficients.
double parseval_norm_sq(const SpectralGrid& grid, std::span<const cplx> coeffs);

ComplexField to_complex(const RealField& f);
ComplexField conj(const ComplexField& f);
RealField real_part(const ComplexField& f);
RealField imag_part(const ComplexField& f);
RealField abs_sq(const ComplexField& f);

double l2_norm_sq(const RealField& f);
double l2_norm_sq(const ComplexField& f);
double max_abs(const RealField& f);
double max_abs(const ComplexField& f);

}  // namespace skdv
