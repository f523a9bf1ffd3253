#pragma once

#include <array>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "json.hpp"
#include "qaoap/common.hpp"
#include "qaoap/rng.hpp"

namespace qaoap {

namespace detail {
inline bool& no_grad_flag() {
  thread_local bool flag = false;
  return flag;
}
}  // namespace detail

/// Scoped guard disabling graph construction (forward values only).
struct NoGrad {
  NoGrad() : prev_(detail::no_grad_flag()) { detail::no_grad_flag() = true; }
  ~NoGrad() { detail::no_grad_flag() = prev_; }

 private:
  bool prev_;
};

/// Dense double tensor (rank <= 3) with reverse-mode autodiff. Values are
/// shared between aliases so data-parallel workers can reuse parameter
/// storage while keeping private gradient buffers.
class Tensor {
 public:
  struct Node {
    std::array<int, 3> dims{1, 1, 1};
    int rank = 2;
    std::shared_ptr<std::vector<double>> value;
    std::vector<double> grad;
    bool requires_grad = false;
    std::vector<std::shared_ptr<Node>> parents;
    std::function<void(Node&)> backprop;  // null for leaves

    std::size_t size() const {
      std::size_t s = 1;
      for (int r = 0; r < rank; ++r) s *= static_cast<std::size_t>(dims[r]);
      return s;
    }
    void ensure_grad() {
      if (grad.size() != size()) grad.assign(size(), 0.0);
    }
  };
  using NodePtr = std::shared_ptr<Node>;

  Tensor() = default;
  explicit Tensor(NodePtr node) : node_(std::move(node)) {}

  static Tensor matrix(int rows, int cols, std::vector<double> data,
                       bool requires_grad = false) {
    if (static_cast<std::size_t>(rows) * cols != data.size())
      throw ConfigError("tensor: shape/data size mismatch");
    auto node = std::make_shared<Node>();
    node->dims = {rows, cols, 1};
    node->rank = 2;
    node->value = std::make_shared<std::vector<double>>(std::move(data));
    node->requires_grad = requires_grad;
    return Tensor(std::move(node));
  }

  static Tensor zeros(int rows, int cols, bool requires_grad = false) {
    return matrix(rows, cols,
                  std::vector<double>(static_cast<std::size_t>(rows) * cols, 0.0),
                  requires_grad);
  }

  static Tensor scalar(double v) { return matrix(1, 1, {v}); }

  static Tensor cube(int d0, int d1, int d2, std::vector<double> data) {
    if (static_cast<std::size_t>(d0) * d1 * d2 != data.size())
      throw ConfigError("tensor: shape/data size mismatch");
    auto node = std::make_shared<Node>();
    node->dims = {d0, d1, d2};
    node->rank = 3;
    node->value = std::make_shared<std::vector<double>>(std::move(data));
    return Tensor(std::move(node));
  }

  /// Shares the value buffer; fresh gradient. For per-worker graphs.
  Tensor alias() const {
    auto node = std::make_shared<Node>();
    node->dims = node_->dims;
    node->rank = node_->rank;
    node->value = node_->value;
    node->requires_grad = node_->requires_grad;
    return Tensor(std::move(node));
  }

  Tensor deep_copy() const {
    auto node = std::make_shared<Node>();
    node->dims = node_->dims;
    node->rank = node_->rank;
    node->value = std::make_shared<std::vector<double>>(*node_->value);
    node->requires_grad = node_->requires_grad;
    return Tensor(std::move(node));
  }

  const NodePtr& node() const { return node_; }
  int rows() const { return node_->dims[0]; }
  int cols() const { return node_->dims[1]; }
  int rank() const { return node_->rank; }
  std::size_t size() const { return node_->size(); }
  std::vector<double>& data() { return *node_->value; }
  const std::vector<double>& data() const { return *node_->value; }
  std::vector<double>& grad() { return node_->grad; }
  const std::vector<double>& grad() const { return node_->grad; }
  bool requires_grad() const { return node_->requires_grad; }
  double item() const {
    if (size() != 1) throw ConfigError("tensor: item() on non-scalar");
    return (*node_->value)[0];
  }
  explicit operator bool() const { return node_ != nullptr; }

 private:
  NodePtr node_;
};

namespace detail {

inline std::string shape_str(const Tensor& t) {
  std::string s = "(";
  for (int r = 0; r < t.rank(); ++r) {
    if (r) s += "x";
    s += std::to_string(t.node()->dims[r]);
  }
  return s + ")";
}

inline Tensor make_op(int rows, int cols, const std::vector<Tensor>& parents,
                      std::function<void(Tensor::Node&)> backprop) {
  auto node = std::make_shared<Tensor::Node>();
  node->dims = {rows, cols, 1};
  node->rank = 2;
  node->value =
      std::make_shared<std::vector<double>>(static_cast<std::size_t>(rows) * cols, 0.0);
  if (!no_grad_flag()) {
    bool needs = false;
    for (const auto& p : parents) needs = needs || p.requires_grad();
    if (needs) {
      node->requires_grad = true;
      for (const auto& p : parents) node->parents.push_back(p.node());
      node->backprop = std::move(backprop);
    }
  }
  return Tensor(std::move(node));
}

// C[mxn] += A[mxk] * B[kxn]
inline void mm_nn(const double* a, const double* b, double* c, int m, int k, int n) {
  for (int i = 0; i < m; ++i) {
    double* crow = c + static_cast<std::size_t>(i) * n;
    const double* arow = a + static_cast<std::size_t>(i) * k;
    for (int kk = 0; kk < k; ++kk) {
      const double av = arow[kk];
      if (av == 0.0) continue;
      const double* brow = b + static_cast<std::size_t>(kk) * n;
      for (int j = 0; j < n; ++j) crow[j] += av * brow[j];
    }
  }
}

// C[mxk] += A[mxn] * B^T, with B[kxn]
inline void mm_nt(const double* a, const double* b, double* c, int m, int n, int k) {
  for (int i = 0; i < m; ++i) {
    const double* arow = a + static_cast<std::size_t>(i) * n;
    double* crow = c + static_cast<std::size_t>(i) * k;
    for (int j = 0; j < k; ++j) {
      const double* brow = b + static_cast<std::size_t>(j) * n;
      double acc = 0.0;
      for (int kk = 0; kk < n; ++kk) acc += arow[kk] * brow[kk];
      crow[j] += acc;
    }
  }
}

// C[kxn] += A^T * B, with A[mxk], B[mxn]
inline void mm_tn(const double* a, const double* b, double* c, int m, int k, int n) {
  for (int i = 0; i < m; ++i) {
    const double* arow = a + static_cast<std::size_t>(i) * k;
    const double* brow = b + static_cast<std::size_t>(i) * n;
    for (int kk = 0; kk < k; ++kk) {
      const double av = arow[kk];
      if (av == 0.0) continue;
      double* crow = c + static_cast<std::size_t>(kk) * n;
      for (int j = 0; j < n; ++j) crow[j] += av * brow[j];
    }
  }
}

}  // namespace detail

inline Tensor matmul(const Tensor& a, const Tensor& b) {
  if (a.cols() != b.rows())
    throw ConfigError("matmul: incompatible shapes " + detail::shape_str(a) + " and " +
                      detail::shape_str(b));
  const int m = a.rows(), k = a.cols(), n = b.cols();
  auto an = a.node();
  auto bn = b.node();
  Tensor out = detail::make_op(m, n, {a, b}, [an, bn, m, k, n](Tensor::Node& self) {
    if (an->requires_grad) {
      an->ensure_grad();
      detail::mm_nt(self.grad.data(), bn->value->data(), an->grad.data(), m, n, k);
    }
    if (bn->requires_grad) {
      bn->ensure_grad();
      detail::mm_tn(an->value->data(), self.grad.data(), bn->grad.data(), m, k, n);
    }
  });
  detail::mm_nn(an->value->data(), bn->value->data(), out.data().data(), m, k, n);
  return out;
}

inline Tensor add(const Tensor& a, const Tensor& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw ConfigError("add: shape mismatch " + detail::shape_str(a) + " vs " +
                      detail::shape_str(b));
  auto an = a.node();
  auto bn = b.node();
  Tensor out = detail::make_op(a.rows(), a.cols(), {a, b}, [an, bn](Tensor::Node& self) {
    for (auto* p : {an.get(), bn.get()}) {
      if (!p->requires_grad) continue;
      p->ensure_grad();
      for (std::size_t i = 0; i < self.grad.size(); ++i) p->grad[i] += self.grad[i];
    }
  });
  for (std::size_t i = 0; i < out.size(); ++i)
    out.data()[i] = a.data()[i] + b.data()[i];
  return out;
}

inline Tensor sub(const Tensor& a, const Tensor& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw ConfigError("sub: shape mismatch " + detail::shape_str(a) + " vs " +
                      detail::shape_str(b));
  auto an = a.node();
  auto bn = b.node();
  Tensor out = detail::make_op(a.rows(), a.cols(), {a, b}, [an, bn](Tensor::Node& self) {
    if (an->requires_grad) {
      an->ensure_grad();
      for (std::size_t i = 0; i < self.grad.size(); ++i) an->grad[i] += self.grad[i];
    }
    if (bn->requires_grad) {
      bn->ensure_grad();
      for (std::size_t i = 0; i < self.grad.size(); ++i) bn->grad[i] -= self.grad[i];
    }
  });
  for (std::size_t i = 0; i < out.size(); ++i)
    out.data()[i] = a.data()[i] - b.data()[i];
  return out;
}

inline Tensor mul(const Tensor& a, const Tensor& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw ConfigError("mul: shape mismatch " + detail::shape_str(a) + " vs " +
                      detail::shape_str(b));
  auto an = a.node();
  auto bn = b.node();
  Tensor out = detail::make_op(a.rows(), a.cols(), {a, b}, [an, bn](Tensor::Node& self) {
    if (an->requires_grad) {
      an->ensure_grad();
      for (std::size_t i = 0; i < self.grad.size(); ++i)
        an->grad[i] += self.grad[i] * (*bn->value)[i];
    }
    if (bn->requires_grad) {
      bn->ensure_grad();
      for (std::size_t i = 0; i < self.grad.size(); ++i)
        bn->grad[i] += self.grad[i] * (*an->value)[i];
    }
  });
  for (std::size_t i = 0; i < out.size(); ++i)
    out.data()[i] = a.data()[i] * b.data()[i];
  return out;
}

inline Tensor scale(const Tensor& a, double c) {
  auto an = a.node();
  Tensor out = detail::make_op(a.rows(), a.cols(), {a}, [an, c](Tensor::Node& self) {
    if (!an->requires_grad) return;
    an->ensure_grad();
    for (std::size_t i = 0; i < self.grad.size(); ++i) an->grad[i] += c * self.grad[i];
  });
  for (std::size_t i = 0; i < out.size(); ++i) out.data()[i] = c * a.data()[i];
  return out;
}

/// Adds a 1 x n bias row to every row of a.
inline Tensor add_rowvec(const Tensor& a, const Tensor& bias) {
  if (bias.rows() != 1 || bias.cols() != a.cols())
    throw ConfigError("add_rowvec: bias shape " + detail::shape_str(bias) +
                      " does not match " + detail::shape_str(a));
  auto an = a.node();
  auto bn = bias.node();
  const int rows = a.rows(), cols = a.cols();
  Tensor out =
      detail::make_op(rows, cols, {a, bias}, [an, bn, rows, cols](Tensor::Node& self) {
        if (an->requires_grad) {
          an->ensure_grad();
          for (std::size_t i = 0; i < self.grad.size(); ++i)
            an->grad[i] += self.grad[i];
        }
        if (bn->requires_grad) {
          bn->ensure_grad();
          for (int r = 0; r < rows; ++r)
            for (int c = 0; c < cols; ++c)
              bn->grad[c] += self.grad[static_cast<std::size_t>(r) * cols + c];
        }
      });
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) {
      const std::size_t i = static_cast<std::size_t>(r) * cols + c;
      out.data()[i] = a.data()[i] + bias.data()[c];
    }
  return out;
}

inline Tensor relu(const Tensor& a) {
  auto an = a.node();
  Tensor out = detail::make_op(a.rows(), a.cols(), {a}, [an](Tensor::Node& self) {
    if (!an->requires_grad) return;
    an->ensure_grad();
    for (std::size_t i = 0; i < self.grad.size(); ++i)
      if ((*an->value)[i] > 0.0) an->grad[i] += self.grad[i];
  });
  for (std::size_t i = 0; i < out.size(); ++i)
    out.data()[i] = a.data()[i] > 0.0 ? a.data()[i] : 0.0;
  return out;
}

inline Tensor sigmoid(const Tensor& a) {
  auto an = a.node();
  Tensor out = detail::make_op(a.rows(), a.cols(), {a}, [an](Tensor::Node& self) {
    if (!an->requires_grad) return;
    an->ensure_grad();
    for (std::size_t i = 0; i < self.grad.size(); ++i) {
      const double y = (*self.value)[i];
      an->grad[i] += self.grad[i] * y * (1.0 - y);
    }
  });
  for (std::size_t i = 0; i < out.size(); ++i)
    out.data()[i] = 1.0 / (1.0 + std::exp(-a.data()[i]));
  return out;
}

inline Tensor abs(const Tensor& a) {
  auto an = a.node();
  Tensor out = detail::make_op(a.rows(), a.cols(), {a}, [an](Tensor::Node& self) {
    if (!an->requires_grad) return;
    an->ensure_grad();
    for (std::size_t i = 0; i < self.grad.size(); ++i) {
      const double v = (*an->value)[i];
      if (v > 0.0)
        an->grad[i] += self.grad[i];
      else if (v < 0.0)
        an->grad[i] -= self.grad[i];
    }
  });
  for (std::size_t i = 0; i < out.size(); ++i) out.data()[i] = std::abs(a.data()[i]);
  return out;
}

/// Inverted dropout: keeps entries with probability 1-rate and rescales by
/// 1/(1-rate) at train time; identity in eval mode.
inline Tensor dropout(const Tensor& a, double rate, bool train, Rng& rng) {
  if (!train || rate <= 0.0) return a;
  if (rate >= 1.0) throw ConfigError("dropout: rate must be < 1");
  auto mask = std::make_shared<std::vector<double>>(a.size());
  const double keep_scale = 1.0 / (1.0 - rate);
  for (auto& m : *mask) m = rng.uniform01() < rate ? 0.0 : keep_scale;
  auto an = a.node();
  Tensor out = detail::make_op(a.rows(), a.cols(), {a}, [an, mask](Tensor::Node& self) {
    if (!an->requires_grad) return;
    an->ensure_grad();
    for (std::size_t i = 0; i < self.grad.size(); ++i)
      an->grad[i] += self.grad[i] * (*mask)[i];
  });
  for (std::size_t i = 0; i < out.size(); ++i)
    out.data()[i] = a.data()[i] * (*mask)[i];
  return out;
}

inline Tensor mean_rows(const Tensor& a) {
  const int rows = a.rows(), cols = a.cols();
  auto an = a.node();
  Tensor out = detail::make_op(1, cols, {a}, [an, rows, cols](Tensor::Node& self) {
    if (!an->requires_grad) return;
    an->ensure_grad();
    const double inv = 1.0 / rows;
    for (int r = 0; r < rows; ++r)
      for (int c = 0; c < cols; ++c)
        an->grad[static_cast<std::size_t>(r) * cols + c] += self.grad[c] * inv;
  });
  for (int c = 0; c < cols; ++c) {
    double sum = 0.0;
    for (int r = 0; r < rows; ++r) sum += a.data()[static_cast<std::size_t>(r) * cols + c];
    out.data()[c] = sum / rows;
  }
  return out;
}

/// Column-wise max over rows; gradient routes to the argmax entries.
inline Tensor max_rows(const Tensor& a) {
  const int rows = a.rows(), cols = a.cols();
  auto argmax = std::make_shared<std::vector<int>>(cols, 0);
  auto an = a.node();
  Tensor out = detail::make_op(1, cols, {a}, [an, argmax, cols](Tensor::Node& self) {
    if (!an->requires_grad) return;
    an->ensure_grad();
    for (int c = 0; c < cols; ++c)
      an->grad[static_cast<std::size_t>((*argmax)[c]) * cols + c] += self.grad[c];
  });
  for (int c = 0; c < cols; ++c) {
    double best = a.data()[c];
    int arg = 0;
    for (int r = 1; r < rows; ++r) {
      const double v = a.data()[static_cast<std::size_t>(r) * cols + c];
      if (v > best) {
        best = v;
        arg = r;
      }
    }
    out.data()[c] = best;
    (*argmax)[c] = arg;
  }
  return out;
}

inline Tensor mean_all(const Tensor& a) {
  const std::size_t count = a.size();
  auto an = a.node();
  Tensor out = detail::make_op(1, 1, {a}, [an, count](Tensor::Node& self) {
    if (!an->requires_grad) return;
    an->ensure_grad();
    const double g = self.grad[0] / static_cast<double>(count);
    for (std::size_t i = 0; i < count; ++i) an->grad[i] += g;
  });
  double sum = 0.0;
  for (double v : a.data()) sum += v;
  out.data()[0] = sum / static_cast<double>(count);
  return out;
}

inline Tensor sum_all(const Tensor& a) {
  const std::size_t count = a.size();
  auto an = a.node();
  Tensor out = detail::make_op(1, 1, {a}, [an, count](Tensor::Node& self) {
    if (!an->requires_grad) return;
    an->ensure_grad();
    for (std::size_t i = 0; i < count; ++i) an->grad[i] += self.grad[0];
  });
  double sum = 0.0;
  for (double v : a.data()) sum += v;
  out.data()[0] = sum;
  return out;
}

inline Tensor concat_cols(const Tensor& a, const Tensor& b) {
  if (a.rows() != b.rows())
    throw ConfigError("concat_cols: row mismatch " + detail::shape_str(a) + " vs " +
                      detail::shape_str(b));
  const int rows = a.rows(), ca = a.cols(), cb = b.cols();
  auto an = a.node();
  auto bn = b.node();
  Tensor out =
      detail::make_op(rows, ca + cb, {a, b}, [an, bn, rows, ca, cb](Tensor::Node& self) {
        const int cols = ca + cb;
        if (an->requires_grad) {
          an->ensure_grad();
          for (int r = 0; r < rows; ++r)
            for (int c = 0; c < ca; ++c)
              an->grad[static_cast<std::size_t>(r) * ca + c] +=
                  self.grad[static_cast<std::size_t>(r) * cols + c];
        }
        if (bn->requires_grad) {
          bn->ensure_grad();
          for (int r = 0; r < rows; ++r)
            for (int c = 0; c < cb; ++c)
              bn->grad[static_cast<std::size_t>(r) * cb + c] +=
                  self.grad[static_cast<std::size_t>(r) * cols + ca + c];
        }
      });
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < ca; ++c)
      out.data()[static_cast<std::size_t>(r) * (ca + cb) + c] =
          a.data()[static_cast<std::size_t>(r) * ca + c];
    for (int c = 0; c < cb; ++c)
      out.data()[static_cast<std::size_t>(r) * (ca + cb) + ca + c] =
          b.data()[static_cast<std::size_t>(r) * cb + c];
  }
  return out;
}

/// Repeats a 1 x n row `count` times; gradients sum back over the copies.
inline Tensor replicate_rows(const Tensor& a, int count) {
  if (a.rows() != 1) throw ConfigError("replicate_rows: input must have one row");
  const int cols = a.cols();
  auto an = a.node();
  Tensor out = detail::make_op(count, cols, {a}, [an, count, cols](Tensor::Node& self) {
    if (!an->requires_grad) return;
    an->ensure_grad();
    for (int r = 0; r < count; ++r)
      for (int c = 0; c < cols; ++c)
        an->grad[c] += self.grad[static_cast<std::size_t>(r) * cols + c];
  });
  for (int r = 0; r < count; ++r)
    for (int c = 0; c < cols; ++c)
      out.data()[static_cast<std::size_t>(r) * cols + c] = a.data()[c];
  return out;
}

/// Reverse-mode sweep from a scalar loss. Interior gradients are zeroed per
/// call; leaf gradients accumulate until the caller clears them. Each node is
/// visited exactly once in reverse topological order.
inline void backward(const Tensor& loss) {
  if (loss.size() != 1) throw ConfigError("backward: loss must be scalar");
  if (!loss.requires_grad()) return;

  std::vector<Tensor::Node*> order;
  std::unordered_map<Tensor::Node*, int> state;  // 1 = on stack, 2 = done
  std::vector<std::pair<Tensor::Node*, std::size_t>> stack;
  stack.push_back({loss.node().get(), 0});
  state[loss.node().get()] = 1;
  while (!stack.empty()) {
    auto& [node, next] = stack.back();
    if (next < node->parents.size()) {
      Tensor::Node* parent = node->parents[next++].get();
      if (!parent->requires_grad) continue;
      const int s = state[parent];
      if (s == 1) throw std::logic_error("backward: cycle in computation graph");
      if (s == 0) {
        state[parent] = 1;
        stack.push_back({parent, 0});
      }
      continue;
    }
    state[node] = 2;
    order.push_back(node);
    stack.pop_back();
  }

  for (Tensor::Node* node : order) {
    if (node->backprop) {
      node->grad.assign(node->size(), 0.0);
    } else {
      node->ensure_grad();
    }
  }
  loss.node()->grad[0] = 1.0;
  for (auto it = order.rbegin(); it != order.rend(); ++it)
    if ((*it)->backprop) (*it)->backprop(**it);
}

inline void zero_grad(std::vector<Tensor>& params) {
  for (auto& p : params) p.node()->grad.assign(p.size(), 0.0);
}

/// Bias-corrected Adam with optional decoupled weight decay.
struct AdamState {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  double weight_decay = 0.0;
  std::int64_t step_count = 0;
  std::vector<std::vector<double>> m, v;

  void init(const std::vector<Tensor>& params) {
    m.clear();
    v.clear();
    for (const auto& p : params) {
      m.emplace_back(p.size(), 0.0);
      v.emplace_back(p.size(), 0.0);
    }
    step_count = 0;
  }
};

inline void adam_step(AdamState& state, std::vector<Tensor>& params) {
  if (state.m.size() != params.size())
    throw ConfigError("adam_step: state not initialized for these parameters");
  ++state.step_count;
  const double bc1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.step_count));
  const double bc2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.step_count));
  for (std::size_t pi = 0; pi < params.size(); ++pi) {
    auto& x = params[pi].data();
    auto& g = params[pi].grad();
    if (g.size() != x.size()) continue;  // no gradient this step
    auto& m = state.m[pi];
    auto& v = state.v[pi];
    for (std::size_t i = 0; i < x.size(); ++i) {
      m[i] = state.beta1 * m[i] + (1.0 - state.beta1) * g[i];
      v[i] = state.beta2 * v[i] + (1.0 - state.beta2) * g[i] * g[i];
      const double mhat = m[i] / bc1;
      const double vhat = v[i] / bc2;
      x[i] -= state.lr * (mhat / (std::sqrt(vhat) + state.eps) +
                          state.weight_decay * x[i]);
    }
  }
}

// --- checkpoint format: magic, u64 header length, JSON header, raw doubles ---

inline void save_checkpoint(const std::filesystem::path& path,
                            const std::vector<std::pair<std::string, Tensor>>& tensors,
                            const nlohmann::json& meta) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  nlohmann::json header;
  header["meta"] = meta;
  auto list = nlohmann::json::array();
  for (const auto& [name, t] : tensors) {
    std::vector<int> shape;
    for (int r = 0; r < t.rank(); ++r) shape.push_back(t.node()->dims[r]);
    list.push_back({{"name", name}, {"shape", shape}});
  }
  header["tensors"] = std::move(list);
  const std::string htext = header.dump();
  out.write("QAPCKPT1", 8);
  const std::uint64_t hlen = htext.size();
  out.write(reinterpret_cast<const char*>(&hlen), 8);
  out.write(htext.data(), static_cast<std::streamsize>(htext.size()));
  for (const auto& [name, t] : tensors)
    out.write(reinterpret_cast<const char*>(t.data().data()),
              static_cast<std::streamsize>(t.size() * sizeof(double)));
}

struct Checkpoint {
  nlohmann::json meta;
  std::vector<std::pair<std::string, Tensor>> tensors;
};

inline Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  char magic[8];
  in.read(magic, 8);
  if (std::memcmp(magic, "QAPCKPT1", 8) != 0)
    throw DataError("bad checkpoint header: " + path.string());
  std::uint64_t hlen = 0;
  in.read(reinterpret_cast<char*>(&hlen), 8);
  std::string htext(hlen, '\0');
  in.read(htext.data(), static_cast<std::streamsize>(hlen));
  if (!in) throw DataError("truncated checkpoint: " + path.string());
  nlohmann::json header = nlohmann::json::parse(htext);
  Checkpoint ckpt;
  ckpt.meta = header.at("meta");
  for (const auto& entry : header.at("tensors")) {
    const auto shape = entry.at("shape").get<std::vector<int>>();
    std::size_t count = 1;
    for (int d : shape) count *= static_cast<std::size_t>(d);
    std::vector<double> data(count);
    in.read(reinterpret_cast<char*>(data.data()),
            static_cast<std::streamsize>(count * sizeof(double)));
    if (!in) throw DataError("truncated checkpoint: " + path.string());
    Tensor t = shape.size() == 3 ? Tensor::cube(shape[0], shape[1], shape[2], data)
               : shape.size() == 2
                   ? Tensor::matrix(shape[0], shape[1], data, true)
                   : Tensor::matrix(1, shape[0], data, true);
    ckpt.tensors.emplace_back(entry.at("name").get<std::string>(), std::move(t));
  }
  return ckpt;
}

}  // namespace qaoap
