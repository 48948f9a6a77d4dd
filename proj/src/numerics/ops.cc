// Copyright 2026 The critrec Authors.
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

#include "critrec/numerics/ops.h"

#include <cmath>
#include <memory>

#include "critrec/common/error.h"

namespace critrec::ops {

namespace {

void RequireSameSize(const Var &a, const Var &b, const char *op) {
  if (a.value().size() != b.value().size()) {
    throw Error("shape", std::string(op) + ": " + ShapeToString(a.shape()) + " vs " +
                             ShapeToString(b.shape()));
  }
}

template <typename F>
Var Unary(Var x, F &&forward_derivative) {
  // forward_derivative(x) -> {y, dy/dx}
  const Tensor &xv = x.value();
  Tensor y(xv.shape());
  auto deriv = std::make_shared<std::vector<Real>>(xv.size());
  for (int64_t i = 0; i < xv.size(); ++i) {
    auto [value, slope] = forward_derivative(xv[i]);
    y[i] = value;
    (*deriv)[i] = slope;
  }
  const int xid = x.id();
  return x.tape()->Record(std::move(y), {x}, [xid, deriv](Tape &t, const Tensor &g) {
    if (!t.requires_grad(xid)) return;
    Tensor &gx = t.GradRef(xid);
    for (int64_t i = 0; i < g.size(); ++i) gx[i] += g[i] * (*deriv)[i];
  });
}

}  // namespace

Var MatMul(Var a, Var b) {
  const Tensor &av = a.value();
  const Tensor &bv = b.value();
  const int64_t n = av.rows(), k = av.cols(), m = bv.cols();
  if (bv.rows() != k) {
    throw Error("shape", "matmul: " + ShapeToString(av.shape()) + " x " + ShapeToString(bv.shape()));
  }
  Tensor out({n, m});
  kernels::MatMul(n, k, m, av.data(), bv.data(), out.data(), false);
  const int aid = a.id(), bid = b.id();
  return a.tape()->Record(std::move(out), {a, b}, [aid, bid, n, k, m](Tape &t, const Tensor &g) {
    if (t.requires_grad(aid)) {
      kernels::MatMulTransB(n, m, k, g.data(), t.value(bid).data(), t.GradRef(aid).data(), true);
    }
    if (t.requires_grad(bid)) {
      kernels::MatMulTransA(k, n, m, t.value(aid).data(), g.data(), t.GradRef(bid).data(), true);
    }
  });
}

Var Add(Var a, Var b) {
  RequireSameSize(a, b, "add");
  Tensor out = a.value();
  const Tensor &bv = b.value();
  for (int64_t i = 0; i < out.size(); ++i) out[i] += bv[i];
  const int aid = a.id(), bid = b.id();
  return a.tape()->Record(std::move(out), {a, b}, [aid, bid](Tape &t, const Tensor &g) {
    for (int id : {aid, bid}) {
      if (!t.requires_grad(id)) continue;
      Tensor &gx = t.GradRef(id);
      for (int64_t i = 0; i < g.size(); ++i) gx[i] += g[i];
    }
  });
}

Var AddRow(Var x, Var bias) {
  const Tensor &xv = x.value();
  const int64_t n = xv.rows(), m = xv.cols();
  if (bias.value().size() != m) {
    throw Error("shape", "add_row: " + ShapeToString(xv.shape()) + " + " +
                             ShapeToString(bias.shape()));
  }
  Tensor out = xv;
  const Tensor &bv = bias.value();
  for (int64_t r = 0; r < n; ++r)
    for (int64_t c = 0; c < m; ++c) out[r * m + c] += bv[c];
  const int xid = x.id(), bid = bias.id();
  return x.tape()->Record(std::move(out), {x, bias}, [xid, bid, n, m](Tape &t, const Tensor &g) {
    if (t.requires_grad(xid)) {
      Tensor &gx = t.GradRef(xid);
      for (int64_t i = 0; i < g.size(); ++i) gx[i] += g[i];
    }
    if (t.requires_grad(bid)) {
      Tensor &gb = t.GradRef(bid);
      for (int64_t c = 0; c < m; ++c) {
        double s = 0.0;
        for (int64_t r = 0; r < n; ++r) s += g[r * m + c];
        gb[c] += static_cast<Real>(s);
      }
    }
  });
}

Var Mul(Var a, Var b) {
  RequireSameSize(a, b, "mul");
  Tensor out = a.value();
  const Tensor &bv = b.value();
  for (int64_t i = 0; i < out.size(); ++i) out[i] *= bv[i];
  const int aid = a.id(), bid = b.id();
  return a.tape()->Record(std::move(out), {a, b}, [aid, bid](Tape &t, const Tensor &g) {
    if (t.requires_grad(aid)) {
      Tensor &ga = t.GradRef(aid);
      const Tensor &bv = t.value(bid);
      for (int64_t i = 0; i < g.size(); ++i) ga[i] += g[i] * bv[i];
    }
    if (t.requires_grad(bid)) {
      Tensor &gb = t.GradRef(bid);
      const Tensor &av = t.value(aid);
      for (int64_t i = 0; i < g.size(); ++i) gb[i] += g[i] * av[i];
    }
  });
}

Var Scale(Var x, Real factor) {
  return Unary(x, [factor](Real v) { return std::pair<Real, Real>{v * factor, factor}; });
}

Var Sigmoid(Var x) {
  return Unary(x, [](Real v) {
    const Real y = v >= 0 ? Real(1) / (Real(1) + std::exp(-v))
                          : std::exp(v) / (Real(1) + std::exp(v));
    return std::pair<Real, Real>{y, y * (Real(1) - y)};
  });
}

Var Relu(Var x) {
  return Unary(x, [](Real v) {
    return v > 0 ? std::pair<Real, Real>{v, Real(1)} : std::pair<Real, Real>{Real(0), Real(0)};
  });
}

Var LeakyRelu(Var x, Real slope) {
  return Unary(x, [slope](Real v) {
    return v > 0 ? std::pair<Real, Real>{v, Real(1)} : std::pair<Real, Real>{slope * v, slope};
  });
}

Var Linear(Var x, Var weight, Var bias) { return AddRow(MatMul(x, weight), bias); }

Var GatherRows(Var x, std::vector<int64_t> index) {
  const Tensor &xv = x.value();
  const int64_t cols = xv.cols();
  const int64_t n = static_cast<int64_t>(index.size());
  Tensor out({n, cols});
  for (int64_t i = 0; i < n; ++i) {
    if (index[i] < 0 || index[i] >= xv.rows()) {
      throw Error("shape", "gather_rows: index " + std::to_string(index[i]) + " outside " +
                               ShapeToString(xv.shape()));
    }
    std::copy_n(xv.data() + index[i] * cols, cols, out.data() + i * cols);
  }
  const int xid = x.id();
  auto idx = std::make_shared<std::vector<int64_t>>(std::move(index));
  return x.tape()->Record(std::move(out), {x}, [xid, idx, cols](Tape &t, const Tensor &g) {
    if (!t.requires_grad(xid)) return;
    Tensor &gx = t.GradRef(xid);
    for (size_t i = 0; i < idx->size(); ++i) {
      Real *dst = gx.data() + (*idx)[i] * cols;
      const Real *src = g.data() + i * cols;
      for (int64_t c = 0; c < cols; ++c) dst[c] += src[c];
    }
  });
}

Var SegmentMean(Var x, std::vector<int64_t> offsets) {
  const Tensor &xv = x.value();
  const int64_t cols = xv.cols();
  const int64_t segments = static_cast<int64_t>(offsets.size()) - 1;
  if (segments < 0 || offsets.front() != 0 || offsets.back() != xv.rows()) {
    throw Error("shape", "segment_mean: offsets do not cover " + ShapeToString(xv.shape()));
  }
  Tensor out({segments, cols});
  for (int64_t s = 0; s < segments; ++s) {
    const int64_t count = offsets[s + 1] - offsets[s];
    if (count == 0) continue;
    for (int64_t c = 0; c < cols; ++c) {
      double acc = 0.0;
      for (int64_t r = offsets[s]; r < offsets[s + 1]; ++r) acc += xv[r * cols + c];
      out[s * cols + c] = static_cast<Real>(acc / count);
    }
  }
  const int xid = x.id();
  auto off = std::make_shared<std::vector<int64_t>>(std::move(offsets));
  return x.tape()->Record(std::move(out), {x}, [xid, off, cols](Tape &t, const Tensor &g) {
    if (!t.requires_grad(xid)) return;
    Tensor &gx = t.GradRef(xid);
    for (size_t s = 0; s + 1 < off->size(); ++s) {
      const int64_t count = (*off)[s + 1] - (*off)[s];
      if (count == 0) continue;
      const Real inv = Real(1) / static_cast<Real>(count);
      for (int64_t r = (*off)[s]; r < (*off)[s + 1]; ++r)
        for (int64_t c = 0; c < cols; ++c) gx[r * cols + c] += g[s * cols + c] * inv;
    }
  });
}

Var ConcatCols(const std::vector<Var> &parts) {
  if (parts.empty()) throw Error("shape", "concat_cols: no inputs");
  const int64_t rows = parts[0].value().rows();
  std::vector<int64_t> widths;
  int64_t total = 0;
  for (const Var &p : parts) {
    if (p.value().rows() != rows) {
      throw Error("shape", "concat_cols: " + ShapeToString(parts[0].shape()) + " vs " +
                               ShapeToString(p.shape()));
    }
    widths.push_back(p.value().cols());
    total += widths.back();
  }
  Tensor out({rows, total});
  int64_t c0 = 0;
  for (size_t k = 0; k < parts.size(); ++k) {
    const Tensor &pv = parts[k].value();
    for (int64_t r = 0; r < rows; ++r)
      std::copy_n(pv.data() + r * widths[k], widths[k], out.data() + r * total + c0);
    c0 += widths[k];
  }
  std::vector<int> ids;
  for (const Var &p : parts) ids.push_back(p.id());
  return parts[0].tape()->Record(
      std::move(out), parts, [ids, widths, rows, total](Tape &t, const Tensor &g) {
        int64_t c0 = 0;
        for (size_t k = 0; k < ids.size(); ++k) {
          if (t.requires_grad(ids[k])) {
            Tensor &gp = t.GradRef(ids[k]);
            for (int64_t r = 0; r < rows; ++r)
              for (int64_t c = 0; c < widths[k]; ++c)
                gp[r * widths[k] + c] += g[r * total + c0 + c];
          }
          c0 += widths[k];
        }
      });
}

Var LayerNorm(Var x, Var gain, Var bias, Real eps) {
  const Tensor &xv = x.value();
  const int64_t n = xv.rows(), m = xv.cols();
  if (gain.value().size() != m || bias.value().size() != m) {
    throw Error("shape", "layer_norm: " + ShapeToString(xv.shape()) + " with gain " +
                             ShapeToString(gain.shape()));
  }
  Tensor out({n, m});
  auto normed = std::make_shared<std::vector<Real>>(n * m);
  auto inv_std = std::make_shared<std::vector<Real>>(n);
  const Tensor &gv = gain.value();
  const Tensor &bv = bias.value();
  for (int64_t r = 0; r < n; ++r) {
    const Real *xr = xv.data() + r * m;
    double mean = 0.0;
    for (int64_t c = 0; c < m; ++c) mean += xr[c];
    mean /= m;
    double var = 0.0;
    for (int64_t c = 0; c < m; ++c) var += (xr[c] - mean) * (xr[c] - mean);
    var /= m;
    const double is = 1.0 / std::sqrt(var + eps);
    (*inv_std)[r] = static_cast<Real>(is);
    for (int64_t c = 0; c < m; ++c) {
      const Real h = static_cast<Real>((xr[c] - mean) * is);
      (*normed)[r * m + c] = h;
      out[r * m + c] = h * gv[c] + bv[c];
    }
  }
  const int xid = x.id(), gid = gain.id(), bid = bias.id();
  return x.tape()->Record(
      std::move(out), {x, gain, bias}, [xid, gid, bid, n, m, normed, inv_std](Tape &t, const Tensor &g) {
        const Tensor &gv = t.value(gid);
        if (t.requires_grad(gid) || t.requires_grad(bid)) {
          std::vector<double> dg(m, 0.0), db(m, 0.0);
          for (int64_t r = 0; r < n; ++r)
            for (int64_t c = 0; c < m; ++c) {
              dg[c] += static_cast<double>(g[r * m + c]) * (*normed)[r * m + c];
              db[c] += g[r * m + c];
            }
          if (t.requires_grad(gid)) {
            Tensor &gg = t.GradRef(gid);
            for (int64_t c = 0; c < m; ++c) gg[c] += static_cast<Real>(dg[c]);
          }
          if (t.requires_grad(bid)) {
            Tensor &gb = t.GradRef(bid);
            for (int64_t c = 0; c < m; ++c) gb[c] += static_cast<Real>(db[c]);
          }
        }
        if (!t.requires_grad(xid)) return;
        Tensor &gx = t.GradRef(xid);
        for (int64_t r = 0; r < n; ++r) {
          double mean_dh = 0.0, mean_dh_h = 0.0;
          for (int64_t c = 0; c < m; ++c) {
            const double dh = static_cast<double>(g[r * m + c]) * gv[c];
            mean_dh += dh;
            mean_dh_h += dh * (*normed)[r * m + c];
          }
          mean_dh /= m;
          mean_dh_h /= m;
          for (int64_t c = 0; c < m; ++c) {
            const double dh = static_cast<double>(g[r * m + c]) * gv[c];
            gx[r * m + c] += static_cast<Real>(
                (*inv_std)[r] * (dh - mean_dh - (*normed)[r * m + c] * mean_dh_h));
          }
        }
      });
}

Var Attention(Var q, Var k, Var v, kernels::AttentionLayout layout) {
  const Tensor &qv = q.value();
  const Tensor &kv = k.value();
  const Tensor &vv = v.value();
  const int64_t d = qv.cols();
  if (kv.cols() != d || vv.cols() != d || kv.rows() != vv.rows()) {
    throw Error("shape", "attention: q " + ShapeToString(qv.shape()) + ", k " +
                             ShapeToString(kv.shape()) + ", v " + ShapeToString(vv.shape()));
  }
  if (layout.heads < 1 || d % layout.heads != 0) {
    throw Error("shape", "attention: width " + std::to_string(d) + " not divisible by " +
                             std::to_string(layout.heads) + " heads");
  }
  if (layout.q_offsets.size() != layout.k_offsets.size() || layout.q_offsets.empty() ||
      layout.q_offsets.back() != qv.rows() || layout.k_offsets.back() != kv.rows()) {
    throw Error("shape", "attention: segment offsets do not cover q " +
                             ShapeToString(qv.shape()) + " / k " + ShapeToString(kv.shape()));
  }
  if (!layout.mask.empty() &&
      (layout.segments() != 1 || static_cast<int64_t>(layout.mask.size()) != qv.rows() * kv.rows())) {
    throw Error("shape", "attention: mask of " + std::to_string(layout.mask.size()) +
                             " entries for scores [" + std::to_string(qv.rows()) + "x" +
                             std::to_string(kv.rows()) + "]");
  }
  auto lay = std::make_shared<kernels::AttentionLayout>(std::move(layout));
  auto probs = std::make_shared<std::vector<Real>>(lay->ProbabilityCount());
  Tensor out({qv.rows(), d});
  kernels::AttentionArgs args{qv.data(), kv.data(), vv.data(), d, lay.get()};
  kernels::AttentionForward(args, out.data(), probs->data());
  const int qid = q.id(), kid = k.id(), vid = v.id();
  return q.tape()->Record(
      std::move(out), {q, k, v}, [qid, kid, vid, d, lay, probs](Tape &t, const Tensor &g) {
        kernels::AttentionArgs args{t.value(qid).data(), t.value(kid).data(),
                                    t.value(vid).data(), d, lay.get()};
        // Scratch buffers keep the kernel free of requires_grad branches.
        Tensor gq(t.value(qid).shape()), gk(t.value(kid).shape()), gv(t.value(vid).shape());
        kernels::AttentionBackward(args, probs->data(), g.data(), gq.data(), gk.data(), gv.data());
        const std::pair<int, Tensor *> grads[] = {{qid, &gq}, {kid, &gk}, {vid, &gv}};
        for (const auto &[id, src] : grads) {
          if (!t.requires_grad(id)) continue;
          Tensor &dst = t.GradRef(id);
          for (int64_t i = 0; i < dst.size(); ++i) dst[i] += (*src)[i];
        }
      });
}

Var ScaledDotAttention(Var q, Var k, Var v, const std::vector<uint8_t> &mask) {
  if (q.value().cols() != k.value().cols()) {
    throw Error("shape", "scaled_dot_attention: Q " + ShapeToString(q.shape()) + " vs K " +
                             ShapeToString(k.shape()));
  }
  if (k.value().rows() != v.value().rows() || v.value().cols() != q.value().cols()) {
    throw Error("shape", "scaled_dot_attention: K " + ShapeToString(k.shape()) + " vs V " +
                             ShapeToString(v.shape()));
  }
  kernels::AttentionLayout layout;
  layout.q_offsets = {0, q.value().rows()};
  layout.k_offsets = {0, k.value().rows()};
  layout.heads = 1;
  layout.mask = mask;
  return Attention(q, k, v, std::move(layout));
}

Var Dropout(Var x, Real p, Rng &rng) {
  if (p <= Real(0)) return x;
  const Real keep = Real(1) - p;
  auto mask = std::make_shared<std::vector<Real>>(x.value().size());
  for (Real &m : *mask) m = rng.Uniform() < keep ? Real(1) / keep : Real(0);
  Tensor out = x.value();
  for (int64_t i = 0; i < out.size(); ++i) out[i] *= (*mask)[i];
  const int xid = x.id();
  return x.tape()->Record(std::move(out), {x}, [xid, mask](Tape &t, const Tensor &g) {
    if (!t.requires_grad(xid)) return;
    Tensor &gx = t.GradRef(xid);
    for (int64_t i = 0; i < g.size(); ++i) gx[i] += g[i] * (*mask)[i];
  });
}

Var Sum(Var x) {
  double s = 0.0;
  for (Real v : x.value().values()) s += v;
  const int xid = x.id();
  return x.tape()->Record(Tensor::Scalar(static_cast<Real>(s)), {x},
                          [xid](Tape &t, const Tensor &g) {
                            if (!t.requires_grad(xid)) return;
                            Tensor &gx = t.GradRef(xid);
                            for (int64_t i = 0; i < gx.size(); ++i) gx[i] += g[0];
                          });
}

Var Mean(Var x) {
  const int64_t n = x.value().size();
  return Scale(Sum(x), Real(1) / static_cast<Real>(n));
}

Var MseLoss(Var prediction, const Tensor &target) {
  const Tensor &pv = prediction.value();
  if (pv.size() != target.size()) {
    throw Error("shape", "mse: " + ShapeToString(pv.shape()) + " vs " +
                             ShapeToString(target.shape()));
  }
  const int64_t n = pv.size();
  double s = 0.0;
  for (int64_t i = 0; i < n; ++i) s += (pv[i] - target[i]) * static_cast<double>(pv[i] - target[i]);
  const int pid = prediction.id();
  return prediction.tape()->Record(
      Tensor::Scalar(static_cast<Real>(s / n)), {prediction}, [pid, target, n](Tape &t, const Tensor &g) {
        if (!t.requires_grad(pid)) return;
        Tensor &gp = t.GradRef(pid);
        const Tensor &pv = t.value(pid);
        for (int64_t i = 0; i < n; ++i) gp[i] += g[0] * Real(2) * (pv[i] - target[i]) / n;
      });
}

Var BceWithLogits(Var logits, const Tensor &targets) {
  const Tensor &xv = logits.value();
  if (xv.size() != targets.size()) {
    throw Error("shape", "bce: " + ShapeToString(xv.shape()) + " vs " +
                             ShapeToString(targets.shape()));
  }
  const int64_t n = xv.size();
  double s = 0.0;
  for (int64_t i = 0; i < n; ++i) {
    const double x = xv[i];
    s += std::max(x, 0.0) - x * targets[i] + std::log1p(std::exp(-std::abs(x)));
  }
  const int xid = logits.id();
  return logits.tape()->Record(
      Tensor::Scalar(static_cast<Real>(s / n)), {logits}, [xid, targets, n](Tape &t, const Tensor &g) {
        if (!t.requires_grad(xid)) return;
        Tensor &gx = t.GradRef(xid);
        const Tensor &xv = t.value(xid);
        for (int64_t i = 0; i < n; ++i) {
          const double x = xv[i];
          const double p = x >= 0 ? 1.0 / (1.0 + std::exp(-x)) : std::exp(x) / (1.0 + std::exp(x));
          gx[i] += static_cast<Real>(g[0] * (p - targets[i]) / n);
        }
      });
}

Var LabelSmoothedCrossEntropy(Var logits, const std::vector<int64_t> &targets, Real epsilon) {
  const Tensor &xv = logits.value();
  const int64_t rows = xv.rows(), vocab = xv.cols();
  if (static_cast<int64_t>(targets.size()) != rows) {
    throw Error("shape", "label_smoothed_ce: " + std::to_string(targets.size()) +
                             " targets for logits " + ShapeToString(xv.shape()));
  }
  const double off = vocab > 1 ? epsilon / static_cast<double>(vocab - 1) : 0.0;
  const double on = 1.0 - epsilon;
  int64_t counted = 0;
  double total = 0.0;
  auto probs = std::make_shared<std::vector<Real>>(rows * vocab);
  for (int64_t r = 0; r < rows; ++r) {
    if (targets[r] < 0) continue;
    if (targets[r] >= vocab) throw Error("shape", "label_smoothed_ce: target out of vocabulary");
    ++counted;
    const Real *x = xv.data() + r * vocab;
    double max_x = x[0];
    for (int64_t c = 1; c < vocab; ++c) max_x = std::max(max_x, static_cast<double>(x[c]));
    double z = 0.0;
    for (int64_t c = 0; c < vocab; ++c) z += std::exp(x[c] - max_x);
    const double lse = max_x + std::log(z);
    double cross = 0.0;
    for (int64_t c = 0; c < vocab; ++c) {
      const double q = c == targets[r] ? on : off;
      cross += q * (x[c] - lse);
      (*probs)[r * vocab + c] = static_cast<Real>(std::exp(x[c] - lse));
    }
    total -= cross;
  }
  const double loss = counted > 0 ? total / counted : 0.0;
  const int xid = logits.id();
  auto tgt = std::make_shared<std::vector<int64_t>>(targets);
  return logits.tape()->Record(
      Tensor::Scalar(static_cast<Real>(loss)), {logits},
      [xid, tgt, probs, rows, vocab, on, off, counted](Tape &t, const Tensor &g) {
        if (!t.requires_grad(xid) || counted == 0) return;
        Tensor &gx = t.GradRef(xid);
        const double scale = g[0] / counted;
        for (int64_t r = 0; r < rows; ++r) {
          if ((*tgt)[r] < 0) continue;
          for (int64_t c = 0; c < vocab; ++c) {
            const double q = c == (*tgt)[r] ? on : off;
            gx[r * vocab + c] += static_cast<Real>(scale * ((*probs)[r * vocab + c] - q));
          }
        }
      });
}

}  // namespace critrec::ops
