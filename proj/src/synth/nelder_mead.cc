// Copyright 2026 The rpitrack Authors
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


#include "rpitrack/synth/nelder_mead.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace rpitrack::synth {

NelderMeadResult NelderMeadMinimize(const std::function<double(const Vector&)>& f,
                                    const Vector& x0, const NelderMeadOptions& opts) {
  const Eigen::Index d = x0.size();
  std::vector<Vector> pts;
  std::vector<double> vals;
  int evals = 0;
  auto eval = [&](const Vector& x) {
    ++evals;
    return f(x);
  };
  pts.push_back(x0);
  vals.push_back(eval(x0));
  for (Eigen::Index i = 0; i < d; ++i) {
    Vector x = x0;
    x[i] += opts.initial_step;
    pts.push_back(x);
    vals.push_back(eval(x));
  }

  std::vector<size_t> order(pts.size());
  auto sort = [&]() {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](size_t a, size_t b) { return vals[a] < vals[b]; });
  };

  while (evals < opts.max_evals) {
    sort();
    const size_t best = order.front();
    const size_t worst = order.back();
    const size_t second = order[order.size() - 2];
    if (std::isfinite(vals[worst]) && vals[worst] - vals[best] < opts.f_tol) break;

    Vector centroid = Vector::Zero(d);
    for (size_t k = 0; k + 1 < order.size(); ++k) centroid += pts[order[k]];
    centroid /= static_cast<double>(d);

    const Vector xr = centroid + (centroid - pts[worst]);
    const double fr = eval(xr);
    if (fr < vals[best]) {
      const Vector xe = centroid + 2.0 * (centroid - pts[worst]);
      const double fe = eval(xe);
      if (fe < fr) {
        pts[worst] = xe;
        vals[worst] = fe;
      } else {
        pts[worst] = xr;
        vals[worst] = fr;
      }
      continue;
    }
    if (fr < vals[second]) {
      pts[worst] = xr;
      vals[worst] = fr;
      continue;
    }
    const bool outside = fr < vals[worst];
    const Vector xc = outside ? Vector(centroid + 0.5 * (xr - centroid))
                              : Vector(centroid + 0.5 * (pts[worst] - centroid));
    const double fc = eval(xc);
    if (fc < (outside ? fr : vals[worst])) {
      pts[worst] = xc;
      vals[worst] = fc;
      continue;
    }
    for (size_t k = 1; k < order.size(); ++k) {
      const size_t i = order[k];
      pts[i] = pts[best] + 0.5 * (pts[i] - pts[best]);
      vals[i] = eval(pts[i]);
    }
  }
  sort();
  return {pts[order.front()], vals[order.front()], evals};
}

}  // namespace rpitrack::synth
