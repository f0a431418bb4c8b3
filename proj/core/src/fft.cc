// core/src/fft.cc

// Copyright 2026  The codec-probe Authors

// See the top-level LICENSE file for clarification regarding multiple authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "codec_probe/fft.h"

#include <fftw3.h>

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>

namespace codec_probe {

namespace {

struct FftwFree {
  void operator()(void *p) const { fftw_free(p); }
};

template <typename T>
std::unique_ptr<T[], FftwFree> Alloc(std::size_t n) {
  return std::unique_ptr<T[], FftwFree>(
      static_cast<T *>(fftw_malloc(sizeof(T) * std::max<std::size_t>(n, 1))));
}

struct PlanPair {
  fftw_plan forward;
  fftw_plan inverse;
};

// Plans live for the process lifetime. Only plan creation needs the lock;
// fftw_execute_dft_* with fresh fftw_malloc buffers is thread-safe.
PlanPair GetPlans(std::size_t n) {
  static std::mutex mu;
  static std::map<std::size_t, PlanPair> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  auto real = Alloc<double>(n);
  auto cplx = Alloc<fftw_complex>(n / 2 + 1);
  int len = static_cast<int>(n);
  PlanPair plans;
  plans.forward =
      fftw_plan_dft_r2c_1d(len, real.get(), cplx.get(), FFTW_ESTIMATE);
  plans.inverse =
      fftw_plan_dft_c2r_1d(len, cplx.get(), real.get(), FFTW_ESTIMATE);
  cache.emplace(n, plans);
  return plans;
}

}  // namespace

RealFft::RealFft(std::size_t n) : n_(n) {
  PlanPair plans = GetPlans(n);
  forward_plan_ = plans.forward;
  inverse_plan_ = plans.inverse;
}

std::vector<std::complex<double>> RealFft::Forward(
    std::span<const double> in) const {
  auto real = Alloc<double>(n_);
  auto cplx = Alloc<fftw_complex>(n_ / 2 + 1);
  std::size_t m = std::min(in.size(), n_);
  std::copy(in.begin(), in.begin() + m, real.get());
  std::fill(real.get() + m, real.get() + n_, 0.0);
  fftw_execute_dft_r2c(static_cast<fftw_plan>(forward_plan_), real.get(),
                       cplx.get());
  std::vector<std::complex<double>> out(n_ / 2 + 1);
  for (std::size_t k = 0; k < out.size(); ++k)
    out[k] = {cplx[k][0], cplx[k][1]};
  return out;
}

std::vector<double> RealFft::Inverse(
    std::span<const std::complex<double>> spectrum) const {
  auto real = Alloc<double>(n_);
  auto cplx = Alloc<fftw_complex>(n_ / 2 + 1);
  for (std::size_t k = 0; k < n_ / 2 + 1; ++k) {
    cplx[k][0] = k < spectrum.size() ? spectrum[k].real() : 0.0;
    cplx[k][1] = k < spectrum.size() ? spectrum[k].imag() : 0.0;
  }
  // c2r destroys its input; cplx is a scratch copy.
  fftw_execute_dft_c2r(static_cast<fftw_plan>(inverse_plan_), cplx.get(),
                       real.get());
  return std::vector<double>(real.get(), real.get() + n_);
}

std::size_t NextPow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

std::vector<double> FftConvolve(std::span<const double> a,
                                std::span<const double> b) {
  if (a.empty() || b.empty()) return {};
  std::size_t out_len = a.size() + b.size() - 1;
  RealFft fft(NextPow2(out_len));
  auto fa = fft.Forward(a);
  auto fb = fft.Forward(b);
  for (std::size_t k = 0; k < fa.size(); ++k) fa[k] *= fb[k];
  auto full = fft.Inverse(fa);
  const double scale = 1.0 / static_cast<double>(fft.size());
  std::vector<double> out(out_len);
  for (std::size_t i = 0; i < out_len; ++i) out[i] = full[i] * scale;
  return out;
}

}  // namespace codec_probe
