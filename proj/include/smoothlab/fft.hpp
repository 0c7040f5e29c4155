#pragma once

// Discrete Fourier transforms of arbitrary length.
//
// Conventions: transform(x, sign)[j] = sum_n x[n] * e(sign * n * j / M),
// e(t) = exp(2*pi*i*t), no normalisation. Power-of-two lengths use an
// iterative radix-2 kernel; every other length goes through Bluestein's
// chirp-z reduction onto a power-of-two convolution.

#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <span>
#include <vector>

namespace smoothlab::fft {

template <typename Real>
using cvec = std::vector<std::complex<Real>>;

/// e(k / n) with k reduced modulo n first, so the angle is always in [0, 2pi).
template <typename Real = double>
std::complex<Real> unit_root(std::int64_t k, std::uint64_t n) {
  const auto nn = static_cast<std::int64_t>(n);
  std::int64_t r = k % nn;
  if (r < 0) r += nn;
  const long double angle = 2.0L * std::numbers::pi_v<long double> *
                            static_cast<long double>(r) /
                            static_cast<long double>(n);
  return {static_cast<Real>(std::cos(angle)),
          static_cast<Real>(std::sin(angle))};
}

/// table[k] = e(k / n) for k in [0, n).
template <typename Real = double>
cvec<Real> unit_roots(std::uint64_t n) {
  cvec<Real> table(n);
  for (std::uint64_t k = 0; k < n; ++k)
    table[k] = unit_root<Real>(static_cast<std::int64_t>(k), n);
  return table;
}

template <typename Real>
void transform_pow2(cvec<Real>& a, int sign) {
  const std::size_t n = a.size();
  if (n <= 1) return;

  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }

  // twiddles for the largest stage; smaller stages stride through them
  cvec<Real> root(n / 2);
  for (std::size_t k = 0; k < n / 2; ++k)
    root[k] = unit_root<Real>(sign * static_cast<std::int64_t>(k), n);

  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t half = len / 2, stride = n / len;
    for (std::size_t i = 0; i < n; i += len) {
      for (std::size_t k = 0; k < half; ++k) {
        const auto u = a[i + k];
        const auto v = a[i + k + half] * root[k * stride];
        a[i + k] = u + v;
        a[i + k + half] = u - v;
      }
    }
  }
}

/// O(M^2) reference transform; the oracle for the fast paths.
template <typename Real>
cvec<Real> transform_direct(std::span<const std::complex<Real>> x, int sign) {
  const std::size_t n = x.size();
  cvec<Real> out(n);
  for (std::size_t j = 0; j < n; ++j) {
    std::complex<Real> acc{};
    for (std::size_t t = 0; t < n; ++t) {
      const auto phase = static_cast<std::int64_t>(
          (static_cast<unsigned __int128>(t) * j) % n);
      acc += x[t] * unit_root<Real>(sign * phase, n);
    }
    out[j] = acc;
  }
  return out;
}

template <typename Real>
cvec<Real> transform_bluestein(std::span<const std::complex<Real>> x,
                               int sign) {
  const std::size_t n = x.size();
  const std::size_t len = std::bit_ceil(2 * n - 1);
  const std::uint64_t two_n = 2 * static_cast<std::uint64_t>(n);

  // chirp[k] = e(sign * k^2 / 2n), k^2 reduced exactly
  cvec<Real> chirp(n);
  for (std::size_t k = 0; k < n; ++k) {
    const auto sq = static_cast<std::int64_t>(
        (static_cast<unsigned __int128>(k) * k) % two_n);
    chirp[k] = unit_root<Real>(sign * sq, two_n);
  }

  cvec<Real> a(len), b(len);
  for (std::size_t k = 0; k < n; ++k) a[k] = x[k] * chirp[k];
  b[0] = std::conj(chirp[0]);
  for (std::size_t k = 1; k < n; ++k) b[k] = b[len - k] = std::conj(chirp[k]);

  transform_pow2(a, +1);
  transform_pow2(b, +1);
  for (std::size_t k = 0; k < len; ++k) a[k] *= b[k];
  transform_pow2(a, -1);

  const Real scale = Real(1) / static_cast<Real>(len);
  cvec<Real> out(n);
  for (std::size_t k = 0; k < n; ++k) out[k] = a[k] * scale * chirp[k];
  return out;
}

template <typename Real>
cvec<Real> transform(std::span<const std::complex<Real>> x, int sign) {
  const std::size_t n = x.size();
  if (n == 0) return {};
  if (std::has_single_bit(n)) {
    cvec<Real> a(x.begin(), x.end());
    transform_pow2(a, sign);
    return a;
  }
  if (n <= 16) return transform_direct(x, sign);
  return transform_bluestein(x, sign);
}

/// Zero-pads a real sequence to length `m` and transforms it.
template <typename Real, typename In>
cvec<Real> transform_real(std::span<const In> x, std::size_t m, int sign) {
  cvec<Real> a(m);
  for (std::size_t i = 0; i < x.size() && i < m; ++i)
    a[i] = static_cast<Real>(x[i]);
  return transform<Real>(std::span<const std::complex<Real>>(a), sign);
}

}  // namespace smoothlab::fft
