// Copyright 2026 The vacheat Authors
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

#include "vacheat/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>
#include <vector>

#include "vacheat/errors.hpp"

namespace vacheat {
namespace {

// Abscissae of the 15-point Kronrod rule on [-1, 1]; odd indices are the
// 7-point Gauss nodes, index 7 is the centre.
constexpr std::array<double, 8> kNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a;
  double b;
  double value;
  double error;
  double l1;

  bool operator<(const Panel& other) const { return error < other.error; }
};

Panel evaluate_panel(const std::function<double(double)>& f, double a, double b) {
  const double centre = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(centre);
  double kronrod = kKronrodWeights[7] * fc;
  double gauss = kGaussWeights[3] * fc;
  double l1 = kKronrodWeights[7] * std::abs(fc);
  for (int i = 0; i < 7; ++i) {
    const double dx = half * kNodes[i];
    const double f1 = f(centre - dx);
    const double f2 = f(centre + dx);
    kronrod += kKronrodWeights[i] * (f1 + f2);
    l1 += kKronrodWeights[i] * (std::abs(f1) + std::abs(f2));
    if (i % 2 == 1) gauss += kGaussWeights[i / 2] * (f1 + f2);
  }
  // Below 50 eps of the panel's |f| integral the estimate is roundoff, not accuracy.
  const double l1_panel = l1 * std::abs(half);
  const double error = std::max(std::abs((kronrod - gauss) * half),
                                50.0 * std::numeric_limits<double>::epsilon() * l1_panel);
  return {a, b, kronrod * half, error, l1_panel};
}

}  // namespace

std::vector<double> uniform_breakpoints(double a, double b, int panels) {
  if (panels < 1) throw Error(ErrorCode::InvalidArgument, "need at least one panel");
  std::vector<double> out(panels + 1);
  for (int i = 0; i <= panels; ++i) out[i] = a + (b - a) * i / panels;
  out.back() = b;
  return out;
}

QuadratureResult integrate(const std::function<double(double)>& f,
                           std::span<const double> breakpoints,
                           const QuadratureOptions& options) {
  if (breakpoints.size() < 2) {
    throw Error(ErrorCode::InvalidArgument, "quadrature needs at least two breakpoints");
  }
  std::priority_queue<Panel> panels;
  int evaluations = 0;
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    panels.push(evaluate_panel(f, breakpoints[i], breakpoints[i + 1]));
    evaluations += 15;
  }

  const auto totals = [&panels] {
    // The queue is small; a copy keeps the accumulation order deterministic.
    auto copy = panels;
    double value = 0.0, error = 0.0, l1 = 0.0;
    while (!copy.empty()) {
      value += copy.top().value;
      error += copy.top().error;
      l1 += copy.top().l1;
      copy.pop();
    }
    return std::array<double, 3>{value, error, l1};
  };

  const auto initial = totals();
  double error = initial[1];
  double l1 = initial[2];
  while (error > std::max(options.abs_tol, options.rel_tol * l1)) {
    if (evaluations + 30 > options.max_evaluations) {
      std::ostringstream msg;
      msg << "error estimate " << error << " above tolerance "
          << std::max(options.abs_tol, options.rel_tol * l1) << " after " << evaluations
          << " evaluations";
      throw Error(ErrorCode::QuadratureNonConvergence, msg.str());
    }
    const Panel worst = panels.top();
    panels.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    const Panel left = evaluate_panel(f, worst.a, mid);
    const Panel right = evaluate_panel(f, mid, worst.b);
    evaluations += 30;
    error += left.error + right.error - worst.error;
    l1 += left.l1 + right.l1 - worst.l1;
    panels.push(left);
    panels.push(right);
    // Running updates drift; refresh exactly now and then.
    if (evaluations % 3000 < 30) {
      auto t = totals();
      error = t[1];
      l1 = t[2];
    }
  }

  const auto t = totals();
  QuadratureResult out;
  out.value = t[0];
  out.error = t[1];
  out.l1_norm = t[2];
  out.evaluations = evaluations;
  return out;
}

}  // namespace vacheat
