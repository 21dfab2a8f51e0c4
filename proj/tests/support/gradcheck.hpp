// Copyright 2026 The ccic Authors.
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

// Central-difference gradient checker for double-precision graphs.
#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "ccic/nn/tape.hpp"
#include "ccic/nn/tensor.hpp"

namespace ccic::testing {

struct GradCheckResult {
  bool ok = true;
  double worst_excess = 0.0;  // max of |a - n| - tol over all entries (<= 0 when ok)
  std::size_t checked = 0;
  /// Entries whose +-h evaluations left the differentiable region (see grad_check).
  std::size_t kink_crossings = 0;
  /// Entries outside tolerance, and for those the largest relative gap
  /// between autodiff and a central difference at h/100. A small value means
  /// the miss is truncation error of the step h, not a wrong gradient.
  std::size_t failures = 0;
  double worst_refined_rel = 0.0;
  std::string detail;
};

/// `loss_fn(tape)` must build a scalar loss from `leaves`, recording on
/// `tape` when it is non-null. Every entry of every leaf is perturbed by
/// +-h; tolerance is max(rel * |numeric|, abs_tol).
///
/// For piecewise-smooth graphs, `same_region` is called after each perturbed
/// evaluation and must report whether every kink input kept the sign it had
/// in the unperturbed evaluation. Entries where it did not straddle a point
/// of non-differentiability, so the central difference does not estimate the
/// derivative there; they are counted in kink_crossings instead of compared.
inline GradCheckResult grad_check(std::vector<nn::TensorD> leaves,
                                  const std::function<nn::TensorD(nn::TapeD*)>& loss_fn, double h = 1e-3,
                                  double rel = 1e-4, double abs_tol = 1e-6,
                                  const std::function<bool()>& same_region = {}) {
  GradCheckResult res;
  res.worst_excess = -INFINITY;
  for (auto& l : leaves) {
    l.zero_grad();
    l.set_requires_grad(true);
  }
  nn::TapeD tape;
  nn::TensorD loss = loss_fn(&tape);
  tape.backward(loss);
  std::vector<std::vector<double>> analytic;
  for (auto& l : leaves) {
    const auto g = l.grad();
    analytic.emplace_back(g.begin(), g.end());
  }
  for (std::size_t li = 0; li < leaves.size(); ++li) {
    auto vals = leaves[li].data();
    for (std::size_t i = 0; i < vals.size(); ++i) {
      const double orig = vals[i];
      vals[i] = orig + h;
      const double up = loss_fn(nullptr).item();
      bool smooth = !same_region || same_region();
      vals[i] = orig - h;
      const double dn = loss_fn(nullptr).item();
      smooth = smooth && (!same_region || same_region());
      vals[i] = orig;
      if (!smooth) {
        ++res.kink_crossings;
        continue;
      }
      const double num = (up - dn) / (2 * h);
      const double a = analytic[li][i];
      const double tol = std::max(rel * std::abs(num), abs_tol);
      const double excess = std::abs(a - num) - tol;
      res.worst_excess = std::max(res.worst_excess, excess);
      ++res.checked;
      if (excess > 0) {
        ++res.failures;
        std::ostringstream os;
        os.precision(9);
        os << "leaf " << li << " entry " << i << ": autodiff " << a << " vs numeric " << num;
        for (double hr : {h / 10, h / 100}) {
          vals[i] = orig + hr;
          const double u = loss_fn(nullptr).item();
          vals[i] = orig - hr;
          const double v = loss_fn(nullptr).item();
          vals[i] = orig;
          const double refined = (u - v) / (2 * hr);
          os << " (h=" << hr << ": " << refined << ")";
          if (hr == h / 100) {
            res.worst_refined_rel = std::max(res.worst_refined_rel, std::abs(a - refined) / std::max(std::abs(a), 1e-12));
          }
        }
        if (res.ok) res.detail = os.str();
        res.ok = false;
      }
    }
  }
  return res;
}

}  // namespace ccic::testing
