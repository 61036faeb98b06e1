// Copyright (c) 2026 The rewardroute Authors. All rights reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "rewardroute/fresnel.hpp"

#include <cmath>
#include <algorithm>
#include <array>
#include <complex>
#include <limits>
#include <numbers>

namespace rewardroute
{

namespace
{

constexpr double kPi = std::numbers::pi;
constexpr double kEps = 1e-16;
constexpr int kMaxIter = 200;

// Power series below this argument, Lentz continued fraction of erfc above.
constexpr double kSeriesLimit = 1.5;

// |a| below this uses the expansion in a around the pure-trig moments.
constexpr double kSmallA = 1.0;
constexpr int kSmallATerms = 17;
constexpr int kMaxMoment = 2 * (kSmallATerms - 1) + 2;
constexpr int kSeriesCap = 80;

constexpr std::array<double, kSeriesCap + kMaxMoment + 2> kInv = [] {
  std::array<double, kSeriesCap + kMaxMoment + 2> t{};
  for (std::size_t i = 1; i < t.size(); ++i) {
    t[i] = 1.0 / static_cast<double>(i);
  }
  return t;
}();

// Moments int_0^1 t^j cos(bt) dt and int_0^1 t^j sin(bt) dt, j = 0..jmax.
// M_j = int t^j e^{ibt} satisfies M_j = (e^{ib} - j M_{j-1}) / (ib); the
// recurrence runs upward for |b| >= 6 and downward from a series otherwise.
void trigMoments(
  double b, int jmax, std::array<double, kMaxMoment + 1> & cm, std::array<double, kMaxMoment + 1> & sm)
{
  const double ec = std::cos(b);
  const double es = std::sin(b);
  if (std::abs(b) < 6.0) {
    // Series sum_m (ib)^m / (m! (jmax + m + 1)).
    double tr = 1.0;
    double ti = 0.0;
    double re = kInv[jmax + 1];
    double im = 0.0;
    for (int m = 1; m < kSeriesCap; ++m) {
      const double f = b * kInv[m];
      const double nr = -ti * f;
      ti = tr * f;
      tr = nr;
      const double inv = kInv[jmax + m + 1];
      re += tr * inv;
      im += ti * inv;
      if (std::abs(tr) + std::abs(ti) <= kEps * inv * (std::abs(re) + std::abs(im))) {
        break;
      }
    }
    cm[jmax] = re;
    sm[jmax] = im;
    for (int j = jmax; j > 0; --j) {
      const double nr = (ec + b * im) * kInv[j];
      im = (es - b * re) * kInv[j];
      re = nr;
      cm[j - 1] = re;
      sm[j - 1] = im;
    }
    return;
  }
  // (e - j M) / (ib) = -i (e - j M) / b
  const double ib = 1.0 / b;
  double re = es * ib;
  double im = (1.0 - ec) * ib;
  cm[0] = re;
  sm[0] = im;
  for (int j = 1; j <= jmax; ++j) {
    const double nr = (es - j * im) * ib;
    im = (j * re - ec) * ib;
    re = nr;
    cm[j] = re;
    sm[j] = im;
  }
}

FresnelMoments smallA(double a, double b, int moments)
{
  // Terms needed for the expansion coefficient (|a|/2)^n / n! to drop below 1e-18.
  int terms = 1;
  for (double c = 1.0; terms < kSmallATerms && c >= 1e-18; ++terms) {
    c *= 0.5 * std::abs(a) * kInv[terms];
  }
  std::array<double, kMaxMoment + 1> cm{};
  std::array<double, kMaxMoment + 1> sm{};
  trigMoments(b, 2 * (terms - 1) + moments - 1, cm, sm);
  FresnelMoments out;
  double coef = 1.0;
  for (int n = 0; n < terms; ++n) {
    if (n > 0) {
      coef *= 0.5 * a * kInv[n];
    }
    for (int k = 0; k < moments; ++k) {
      const int j = 2 * n + k;
      double xc = 0.0;
      double yc = 0.0;
      switch (n % 4) {
        case 0: xc = cm[j]; yc = sm[j]; break;
        case 1: xc = -sm[j]; yc = cm[j]; break;
        case 2: xc = -cm[j]; yc = -sm[j]; break;
        default: xc = sm[j]; yc = -cm[j]; break;
      }
      out.x[k] += coef * xc;
      out.y[k] += coef * yc;
    }
  }
  return out;
}

FresnelMoments largeA(double a, double b)
{
  if (a < 0.0) {
    FresnelMoments m = largeA(-a, -b);
    for (int k = 0; k < 3; ++k) {
      m.y[k] = -m.y[k];
    }
    return m;
  }
  const double s0 = b / std::sqrt(kPi * a);
  const double s1 = s0 + std::sqrt(a / kPi);
  const double g = -0.5 * b * b / a;
  const FresnelCS f0 = fresnel(s0);
  const FresnelCS f1 = fresnel(s1);
  const double dc = f1.c - f0.c;
  const double ds = f1.s - f0.s;
  const double scale = std::sqrt(kPi / a);
  const double cg = std::cos(g);
  const double sg = std::sin(g);

  FresnelMoments m;
  m.x[0] = scale * (cg * dc - sg * ds);
  m.y[0] = scale * (sg * dc + cg * ds);

  const double phi1 = 0.5 * a + b;
  const double sp = std::sin(phi1);
  const double cp = std::cos(phi1);
  m.x[1] = (sp - b * m.x[0]) / a;
  m.y[1] = (1.0 - cp - b * m.y[0]) / a;
  m.x[2] = (sp - m.y[0] - b * m.x[1]) / a;
  m.y[2] = (m.x[0] - b * m.y[1] - cp) / a;
  return m;
}

}  // namespace

FresnelCS fresnel(double x)
{
  const double t = std::abs(x);
  FresnelCS r;
  if (t < std::numeric_limits<double>::min() * 1e4) {
    r.c = t;
    r.s = 0.0;
  } else if (t <= kSeriesLimit) {
    // Alternating series, even terms build C, odd terms build S.
    const double fact = 0.5 * kPi * t * t;
    double sumc = t;
    double sums = 0.0;
    double sum = 0.0;
    double sign = 1.0;
    double term = t;
    bool odd = true;
    int n = 3;
    for (int k = 1; k <= kMaxIter; ++k) {
      term *= fact / k;
      sum += sign * term / n;
      const double test = std::abs(sum) * kEps;
      if (odd) {
        sign = -sign;
        sums = sum;
        sum = sumc;
      } else {
        sumc = sum;
        sum = sums;
      }
      if (term < test) {
        break;
      }
      odd = !odd;
      n += 2;
    }
    r.c = sumc;
    r.s = sums;
  } else {
    using cd = std::complex<double>;
    const double pix2 = kPi * t * t;
    cd b(1.0, -pix2);
    cd cc = 1.0 / (std::numeric_limits<double>::min() * 1e4);
    cd d = 1.0 / b;
    cd h = d;
    int n = -1;
    for (int k = 2; k <= kMaxIter; ++k) {
      n += 2;
      const double an = -static_cast<double>(n) * (n + 1);
      b += 4.0;
      d = 1.0 / (an * d + b);
      cc = b + an / cc;
      const cd del = cc * d;
      h *= del;
      if (std::abs(del.real() - 1.0) + std::abs(del.imag()) < 1e-15) {
        break;
      }
    }
    h *= cd(t, -t);
    const cd cs = cd(0.5, 0.5) * (1.0 - cd(std::cos(0.5 * pix2), std::sin(0.5 * pix2)) * h);
    r.c = cs.real();
    r.s = cs.imag();
  }
  if (x < 0.0) {
    r.c = -r.c;
    r.s = -r.s;
  }
  return r;
}

FresnelMoments generalizedFresnel(double a, double b, double c)
{
  return generalizedFresnel(a, b, c, 3);
}

FresnelMoments generalizedFresnel(double a, double b, double c, int moments)
{
  FresnelMoments m = std::abs(a) < kSmallA ? smallA(a, b, std::clamp(moments, 1, 3)) : largeA(a, b);
  const double cc = std::cos(c);
  const double sc = std::sin(c);
  for (int k = 0; k < 3; ++k) {
    const double xk = m.x[k];
    const double yk = m.y[k];
    m.x[k] = cc * xk - sc * yk;
    m.y[k] = sc * xk + cc * yk;
  }
  return m;
}

}  // namespace rewardroute
