#ifndef AMHD_SPECTRAL_CORE_HPP
#define AMHD_SPECTRAL_CORE_HPP

// Fourier representation of real fields on the periodic box [0,1) x [0,Ly).
//
// Coefficients are stored in FFT order: array index i in [0, N) carries the
// signed mode n = i for i < N/2 and n = i - N otherwise. The forward transform
// divides by Nx*Ny, so coeffs(0,0) is the field mean and Parseval reads
//   sum |c_k|^2 = mean(f^2),   ||f||_{L^2}^2 = Ly * sum |c_k|^2.
// Physical samples are (Nx x Ny) arrays: sample(i, j) = f(i/Nx, j*Ly/Ny).

#include <Eigen/Core>
#include <unsupported/Eigen/FFT>

#include <cmath>
#include <complex>
#include <memory>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace amhd {

enum class Axis { x, y };

template <typename Scalar>
using RealArray = Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using ComplexArray = Eigen::Array<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using RealColumn = Eigen::Array<Scalar, Eigen::Dynamic, 1>;

/// Discretization of the periodic strip [0,1) x [0,Ly).
///
/// Wavenumber tables are shared between copies, so grids are cheap to pass by
/// value. Two tables exist per axis: `kx()` holds 2*pi*n/L for every stored
/// mode, `kx_odd()` is the same with the Nyquist entry set to zero. Odd-order
/// derivatives (and therefore divergence and the Leray projector) use the
/// latter so that real fields stay real.
template <typename Scalar>
class Grid {
 public:
  Grid(int nx, int ny, Scalar ly) : nx_(nx), ny_(ny), ly_(ly) {
    if (nx < 4 || ny < 4 || nx % 2 != 0 || ny % 2 != 0) {
      throw std::invalid_argument("grid sizes must be even and >= 4 (got Nx=" + std::to_string(nx) +
                                  ", Ny=" + std::to_string(ny) + ")");
    }
    if (!(ly > Scalar(0)) || !std::isfinite(static_cast<double>(ly))) {
      throw std::invalid_argument("grid period Ly must be positive and finite");
    }
    auto tables = std::make_shared<Tables>();
    const Scalar two_pi = Scalar(2) * std::numbers::pi_v<Scalar>;
    tables->kx.resize(nx);
    tables->ky.resize(ny);
    for (int i = 0; i < nx; ++i) tables->kx(i) = two_pi * Scalar(mode_index(i, nx)) / lx();
    for (int j = 0; j < ny; ++j) tables->ky(j) = two_pi * Scalar(mode_index(j, ny)) / ly;
    tables->kx_odd = tables->kx;
    tables->ky_odd = tables->ky;
    tables->kx_odd(nx / 2) = Scalar(0);
    tables->ky_odd(ny / 2) = Scalar(0);
    tables_ = std::move(tables);
  }

  int nx() const { return nx_; }
  int ny() const { return ny_; }
  static constexpr Scalar lx() { return Scalar(1); }
  Scalar ly() const { return ly_; }
  Scalar dx() const { return lx() / Scalar(nx_); }
  Scalar dy() const { return ly_ / Scalar(ny_); }
  /// Lebesgue measure of the box.
  Scalar area() const { return lx() * ly_; }

  const RealColumn<Scalar>& kx() const { return tables_->kx; }
  const RealColumn<Scalar>& ky() const { return tables_->ky; }
  const RealColumn<Scalar>& kx_odd() const { return tables_->kx_odd; }
  const RealColumn<Scalar>& ky_odd() const { return tables_->ky_odd; }

  /// Signed mode number stored at array index i of an axis with n points.
  static constexpr int mode_index(int i, int n) { return i < n / 2 ? i : i - n; }
  /// Array index holding signed mode m (wrapped into the stored range).
  static constexpr int array_index(int m, int n) { return ((m % n) + n) % n; }

  int mode_x(int i) const { return mode_index(i, nx_); }
  int mode_y(int j) const { return mode_index(j, ny_); }

  Scalar x(int i) const { return Scalar(i) * dx(); }
  Scalar y(int j) const { return Scalar(j) * dy(); }

  friend bool operator==(const Grid& a, const Grid& b) {
    return a.nx_ == b.nx_ && a.ny_ == b.ny_ && a.ly_ == b.ly_;
  }

 private:
  struct Tables {
    RealColumn<Scalar> kx, ky, kx_odd, ky_odd;
  };
  int nx_;
  int ny_;
  Scalar ly_;
  std::shared_ptr<const Tables> tables_;
};

template <typename Scalar>
Grid<Scalar> make_grid(int nx, int ny, Scalar ly) {
  return Grid<Scalar>(nx, ny, ly);
}

namespace detail {

template <typename Scalar>
Eigen::FFT<Scalar>& fft_engine() {
  // Eigen::FFT caches plans and is not safe to share between threads.
  thread_local Eigen::FFT<Scalar> engine = [] {
    Eigen::FFT<Scalar> e;
    e.SetFlag(Eigen::FFT<Scalar>::Unscaled);
    return e;
  }();
  return engine;
}

/// In-place unnormalized 2D DFT. Columns (x direction) are contiguous.
template <typename Scalar>
void fft2(ComplexArray<Scalar>& a, bool inverse) {
  using Complex = std::complex<Scalar>;
  auto& engine = fft_engine<Scalar>();
  const Eigen::Index nx = a.rows();
  const Eigen::Index ny = a.cols();
  std::vector<Complex> in(std::max(nx, ny));
  std::vector<Complex> out(std::max(nx, ny));
  for (Eigen::Index j = 0; j < ny; ++j) {
    Complex* col = a.col(j).data();
    std::copy(col, col + nx, in.begin());
    if (inverse) {
      engine.inv(out.data(), in.data(), nx);
    } else {
      engine.fwd(out.data(), in.data(), nx);
    }
    std::copy(out.begin(), out.begin() + nx, col);
  }
  for (Eigen::Index i = 0; i < nx; ++i) {
    for (Eigen::Index j = 0; j < ny; ++j) in[j] = a(i, j);
    if (inverse) {
      engine.inv(out.data(), in.data(), ny);
    } else {
      engine.fwd(out.data(), in.data(), ny);
    }
    for (Eigen::Index j = 0; j < ny; ++j) a(i, j) = out[j];
  }
}

/// Inverse DFT along y only, one row (fixed x-mode) at a time.
template <typename Scalar>
ComplexArray<Scalar> inverse_fft_y(const ComplexArray<Scalar>& a) {
  using Complex = std::complex<Scalar>;
  auto& engine = fft_engine<Scalar>();
  const Eigen::Index nx = a.rows();
  const Eigen::Index ny = a.cols();
  ComplexArray<Scalar> result(nx, ny);
  std::vector<Complex> in(ny), out(ny);
  for (Eigen::Index i = 0; i < nx; ++i) {
    for (Eigen::Index j = 0; j < ny; ++j) in[j] = a(i, j);
    engine.inv(out.data(), in.data(), ny);
    for (Eigen::Index j = 0; j < ny; ++j) result(i, j) = out[j];
  }
  return result;
}

}  // namespace detail

/// One real scalar field held by its Fourier coefficients.
template <typename Scalar>
class SpectralField {
 public:
  using Complex = std::complex<Scalar>;
  using Coeffs = ComplexArray<Scalar>;
  using Samples = RealArray<Scalar>;

  explicit SpectralField(Grid<Scalar> grid)
      : grid_(std::move(grid)), coeffs_(Coeffs::Zero(grid_.nx(), grid_.ny())) {}

  SpectralField(Grid<Scalar> grid, Coeffs coeffs) : grid_(std::move(grid)), coeffs_(std::move(coeffs)) {
    if (coeffs_.rows() != grid_.nx() || coeffs_.cols() != grid_.ny()) {
      throw std::invalid_argument("coefficient array does not match the grid");
    }
  }

  const Grid<Scalar>& grid() const { return grid_; }
  const Coeffs& coeffs() const { return coeffs_; }
  Coeffs& coeffs() { return coeffs_; }

  /// Coefficient of signed mode (mx, my).
  Complex mode(int mx, int my) const {
    return coeffs_(Grid<Scalar>::array_index(mx, grid_.nx()), Grid<Scalar>::array_index(my, grid_.ny()));
  }
  Complex& mode(int mx, int my) {
    return coeffs_(Grid<Scalar>::array_index(mx, grid_.nx()), Grid<Scalar>::array_index(my, grid_.ny()));
  }

  SpectralField& operator+=(const SpectralField& o) {
    check_same_grid(o);
    coeffs_ += o.coeffs_;
    return *this;
  }
  SpectralField& operator-=(const SpectralField& o) {
    check_same_grid(o);
    coeffs_ -= o.coeffs_;
    return *this;
  }
  SpectralField& operator*=(Scalar a) {
    coeffs_ *= a;
    return *this;
  }

  friend SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
  friend SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
  friend SpectralField operator*(Scalar s, SpectralField a) { return a *= s; }
  friend SpectralField operator*(SpectralField a, Scalar s) { return a *= s; }
  friend SpectralField operator-(SpectralField a) {
    a.coeffs_ = -a.coeffs_;
    return a;
  }

  void check_same_grid(const SpectralField& o) const {
    if (!(grid_ == o.grid_)) throw std::invalid_argument("fields live on different grids");
  }

 private:
  Grid<Scalar> grid_;
  Coeffs coeffs_;
};

/// Pair of scalar fields (two components of a planar vector field).
template <typename Scalar>
struct VectorField {
  SpectralField<Scalar> x_comp;
  SpectralField<Scalar> y_comp;
  bool div_free = false;

  explicit VectorField(const Grid<Scalar>& grid) : x_comp(grid), y_comp(grid) {}
  VectorField(SpectralField<Scalar> a, SpectralField<Scalar> b, bool divergence_free = false)
      : x_comp(std::move(a)), y_comp(std::move(b)), div_free(divergence_free) {
    x_comp.check_same_grid(y_comp);
  }

  const Grid<Scalar>& grid() const { return x_comp.grid(); }

  const SpectralField<Scalar>& operator[](int c) const { return c == 0 ? x_comp : y_comp; }
  SpectralField<Scalar>& operator[](int c) { return c == 0 ? x_comp : y_comp; }

  friend VectorField operator+(const VectorField& a, const VectorField& b) {
    return {a.x_comp + b.x_comp, a.y_comp + b.y_comp, a.div_free && b.div_free};
  }
  friend VectorField operator-(const VectorField& a, const VectorField& b) {
    return {a.x_comp - b.x_comp, a.y_comp - b.y_comp, a.div_free && b.div_free};
  }
  friend VectorField operator*(Scalar s, const VectorField& a) {
    return {s * a.x_comp, s * a.y_comp, a.div_free};
  }
};

// ---------------------------------------------------------------------------
// Transforms

template <typename Scalar>
SpectralField<Scalar> to_spectral(const Grid<Scalar>& grid, const RealArray<Scalar>& samples) {
  if (samples.rows() != grid.nx() || samples.cols() != grid.ny()) {
    throw std::invalid_argument("sample array is " + std::to_string(samples.rows()) + "x" +
                                std::to_string(samples.cols()) + ", grid is " + std::to_string(grid.nx()) +
                                "x" + std::to_string(grid.ny()));
  }
  ComplexArray<Scalar> c = samples.template cast<std::complex<Scalar>>();
  detail::fft2(c, false);
  c /= Scalar(grid.nx()) * Scalar(grid.ny());
  return SpectralField<Scalar>(grid, std::move(c));
}

template <typename Scalar>
RealArray<Scalar> from_spectral(const SpectralField<Scalar>& f) {
  ComplexArray<Scalar> c = f.coeffs();
  detail::fft2(c, true);
  return c.real();
}

/// Transforms two real fields with a single complex FFT.
template <typename Scalar>
std::pair<RealArray<Scalar>, RealArray<Scalar>> from_spectral_pair(const SpectralField<Scalar>& f,
                                                                   const SpectralField<Scalar>& g) {
  f.check_same_grid(g);
  ComplexArray<Scalar> c = f.coeffs() + std::complex<Scalar>(0, 1) * g.coeffs();
  detail::fft2(c, true);
  return {c.real(), c.imag()};
}

/// Forward transform of two real sample arrays with a single complex FFT.
template <typename Scalar>
std::pair<SpectralField<Scalar>, SpectralField<Scalar>> to_spectral_pair(const Grid<Scalar>& grid,
                                                                         const RealArray<Scalar>& a,
                                                                         const RealArray<Scalar>& b) {
  using Complex = std::complex<Scalar>;
  const int nx = grid.nx();
  const int ny = grid.ny();
  if (a.rows() != nx || a.cols() != ny || b.rows() != nx || b.cols() != ny) {
    throw std::invalid_argument("sample arrays do not match the grid");
  }
  ComplexArray<Scalar> z(nx, ny);
  z.real() = a;
  z.imag() = b;
  detail::fft2(z, false);
  const Scalar norm = Scalar(1) / (Scalar(nx) * Scalar(ny));
  ComplexArray<Scalar> ca(nx, ny), cb(nx, ny);
  for (int j = 0; j < ny; ++j) {
    const int jm = (ny - j) % ny;
    for (int i = 0; i < nx; ++i) {
      const int im = (nx - i) % nx;
      const Complex zk = z(i, j);
      const Complex zm = std::conj(z(im, jm));
      ca(i, j) = (zk + zm) * (Scalar(0.5) * norm);
      cb(i, j) = (zk - zm) * (Complex(0, -0.5) * norm);
    }
  }
  return {SpectralField<Scalar>(grid, std::move(ca)), SpectralField<Scalar>(grid, std::move(cb))};
}

/// Samples a callable f(x, y) on the grid nodes.
template <typename Scalar, typename Fn>
RealArray<Scalar> sample(const Grid<Scalar>& grid, Fn&& fn) {
  RealArray<Scalar> s(grid.nx(), grid.ny());
  for (int j = 0; j < grid.ny(); ++j) {
    for (int i = 0; i < grid.nx(); ++i) s(i, j) = fn(grid.x(i), grid.y(j));
  }
  return s;
}

template <typename Scalar, typename Fn>
SpectralField<Scalar> project_function(const Grid<Scalar>& grid, Fn&& fn) {
  return to_spectral(grid, sample(grid, std::forward<Fn>(fn)));
}

// ---------------------------------------------------------------------------
// Modal operators

/// Multiplies by (i k_axis)^order. Odd orders drop the Nyquist mode.
template <typename Scalar>
SpectralField<Scalar> derivative(const SpectralField<Scalar>& f, Axis axis, int order = 1) {
  using Complex = std::complex<Scalar>;
  if (order < 0) throw std::invalid_argument("derivative order must be non-negative");
  SpectralField<Scalar> out = f;
  if (order == 0) return out;
  const auto& grid = f.grid();
  const bool odd = (order % 2) != 0;
  const RealColumn<Scalar>& k =
      axis == Axis::x ? (odd ? grid.kx_odd() : grid.kx()) : (odd ? grid.ky_odd() : grid.ky());
  Eigen::Array<Complex, Eigen::Dynamic, 1> factor(k.size());
  for (Eigen::Index n = 0; n < k.size(); ++n) factor(n) = std::pow(Complex(0, k(n)), order);
  if (axis == Axis::x) {
    out.coeffs().colwise() *= factor;
  } else {
    out.coeffs().rowwise() *= factor.transpose();
  }
  return out;
}

/// True when signed mode n survives the 2/3 truncation on an axis of N points.
constexpr bool retained_mode(int n, int npoints) { return 3 * (n < 0 ? -n : n) <= npoints; }

/// Zeros every mode with |n_x| > Nx/3 or |n_y| > Ny/3.
template <typename Scalar>
SpectralField<Scalar> dealias(SpectralField<Scalar> f) {
  const auto& grid = f.grid();
  auto& c = f.coeffs();
  for (int j = 0; j < grid.ny(); ++j) {
    const bool keep_y = retained_mode(grid.mode_y(j), grid.ny());
    for (int i = 0; i < grid.nx(); ++i) {
      if (!keep_y || !retained_mode(grid.mode_x(i), grid.nx())) c(i, j) = 0;
    }
  }
  return f;
}

template <typename Scalar>
VectorField<Scalar> dealias(const VectorField<Scalar>& w) {
  return {dealias(w.x_comp), dealias(w.y_comp), w.div_free};
}

/// Pseudo-spectral product: pointwise in physical space, then truncated.
template <typename Scalar>
SpectralField<Scalar> multiply(const SpectralField<Scalar>& f, const SpectralField<Scalar>& g) {
  f.check_same_grid(g);
  auto [fs, gs] = from_spectral_pair(f, g);
  return dealias(to_spectral(f.grid(), RealArray<Scalar>(fs * gs)));
}

template <typename Scalar>
SpectralField<Scalar> divergence(const VectorField<Scalar>& w) {
  return derivative(w.x_comp, Axis::x) + derivative(w.y_comp, Axis::y);
}

/// max_k |k . w(k)| / max_k |k| |w(k)|; zero for a field without gradients.
template <typename Scalar>
Scalar divergence_residual(const VectorField<Scalar>& w) {
  const auto& grid = w.grid();
  const auto& kx = grid.kx_odd();
  const auto& ky = grid.ky_odd();
  Scalar num = 0;
  Scalar den = 0;
  for (int j = 0; j < grid.ny(); ++j) {
    for (int i = 0; i < grid.nx(); ++i) {
      const auto a = w.x_comp.coeffs()(i, j);
      const auto b = w.y_comp.coeffs()(i, j);
      num = std::max(num, std::abs(kx(i) * a + ky(j) * b));
      const Scalar kmag = std::sqrt(kx(i) * kx(i) + ky(j) * ky(j));
      den = std::max(den, kmag * std::sqrt(std::norm(a) + std::norm(b)));
    }
  }
  return den > 0 ? num / den : Scalar(0);
}

/// Modal projection (I - k k^T / |k|^2) onto divergence-free fields; k = 0 passes through.
template <typename Scalar>
VectorField<Scalar> leray_project(const VectorField<Scalar>& w) {
  VectorField<Scalar> out = w;
  const auto& grid = w.grid();
  const auto& kx = grid.kx_odd();
  const auto& ky = grid.ky_odd();
  auto& a = out.x_comp.coeffs();
  auto& b = out.y_comp.coeffs();
  for (int j = 0; j < grid.ny(); ++j) {
    for (int i = 0; i < grid.nx(); ++i) {
      const Scalar k2 = kx(i) * kx(i) + ky(j) * ky(j);
      if (k2 == Scalar(0)) continue;
      const auto p = (kx(i) * a(i, j) + ky(j) * b(i, j)) / k2;
      a(i, j) -= kx(i) * p;
      b(i, j) -= ky(j) * p;
    }
  }
  out.div_free = true;
  return out;
}

// ---------------------------------------------------------------------------
// Norms and inner products (domain measure included)

/// Real L^2 inner product over the box via Parseval.
template <typename Scalar>
Scalar inner(const SpectralField<Scalar>& f, const SpectralField<Scalar>& g) {
  f.check_same_grid(g);
  return f.grid().area() * (f.coeffs() * g.coeffs().conjugate()).real().sum();
}

template <typename Scalar>
Scalar inner(const VectorField<Scalar>& f, const VectorField<Scalar>& g) {
  return inner(f.x_comp, g.x_comp) + inner(f.y_comp, g.y_comp);
}

template <typename Scalar>
Scalar l2_norm_squared(const SpectralField<Scalar>& f) {
  return f.grid().area() * f.coeffs().abs2().sum();
}

template <typename Scalar>
Scalar l2_norm_squared(const VectorField<Scalar>& w) {
  return l2_norm_squared(w.x_comp) + l2_norm_squared(w.y_comp);
}

template <typename Scalar>
Scalar l2_norm(const SpectralField<Scalar>& f) {
  return std::sqrt(l2_norm_squared(f));
}

template <typename Scalar>
Scalar l2_norm(const VectorField<Scalar>& w) {
  return std::sqrt(l2_norm_squared(w));
}

/// ||d_x^a d_y^b f||^2 computed modally (even-order tables, Nyquist kept).
template <typename Scalar>
Scalar derivative_norm_squared(const SpectralField<Scalar>& f, int order_x, int order_y) {
  const auto& grid = f.grid();
  RealColumn<Scalar> wx = grid.kx().abs().pow(Scalar(2 * order_x));
  RealColumn<Scalar> wy = grid.ky().abs().pow(Scalar(2 * order_y));
  if (order_x == 0) wx.setOnes();
  if (order_y == 0) wy.setOnes();
  RealArray<Scalar> weights = wx.matrix() * wy.matrix().transpose();
  return grid.area() * (weights * f.coeffs().abs2()).sum();
}

template <typename Scalar>
Scalar derivative_norm_squared(const VectorField<Scalar>& w, int order_x, int order_y) {
  return derivative_norm_squared(w.x_comp, order_x, order_y) + derivative_norm_squared(w.y_comp, order_x, order_y);
}

template <typename Scalar>
Scalar max_abs(const SpectralField<Scalar>& f) {
  return from_spectral(f).abs().maxCoeff();
}

/// Largest pointwise Euclidean magnitude of a vector field.
template <typename Scalar>
Scalar max_magnitude(const VectorField<Scalar>& w) {
  auto [a, b] = from_spectral_pair(w.x_comp, w.y_comp);
  return (a.square() + b.square()).sqrt().maxCoeff();
}

}  // namespace amhd

#endif  // AMHD_SPECTRAL_CORE_HPP
