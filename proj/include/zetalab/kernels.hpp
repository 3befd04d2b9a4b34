#pragma once

// Data-parallel inner loops.  Each kernel has a plain serial reference and an
// OpenMP variant; both write every output slot independently, so results are
// bitwise identical for any thread count.

#include <omp.h>

#include <algorithm>
#include <cstdint>
#include <vector>

#include "zetalab/params.hpp"
#include "zetalab/scalar.hpp"
#include "zetalab/series_spec.hpp"

namespace zetalab {

enum class ExecPolicy { serial, parallel };

namespace kernels {

/// 1 / ((m+alpha)^a (m+beta)^b (m+gamma)^c), negative exponents allowed.
template <class T>
T node_weight(const Node& node, const ParamPoint<T>& p, std::int64_t m) {
  T num(1);
  T den(1);
  auto apply = [&](int e, const T& shift) {
    if (e == 0) return;
    T base = T(m) + shift;
    if (e > 0) {
      den *= ipow(base, static_cast<unsigned>(e));
    } else {
      num *= ipow(base, static_cast<unsigned>(-e));
    }
  };
  apply(node.a, p.alpha);
  apply(node.b, p.beta);
  if (node.c != 0) apply(node.c, *p.gamma);
  num /= den;
  return num;
}

/// Distinct weight nodes of a flattened series; layers sharing a node share
/// one table.
struct WeightPlan {
  std::vector<Node> nodes;
  std::vector<int> layer_node;
};

inline WeightPlan plan_weights(const std::vector<Layer>& layers) {
  WeightPlan plan;
  for (const auto& layer : layers) {
    auto it = std::find(plan.nodes.begin(), plan.nodes.end(), layer.weight);
    if (it == plan.nodes.end()) {
      plan.layer_node.push_back(static_cast<int>(plan.nodes.size()));
      plan.nodes.push_back(layer.weight);
    } else {
      plan.layer_node.push_back(static_cast<int>(it - plan.nodes.begin()));
    }
  }
  return plan;
}

/// tables[node][i] = weight of node at m_begin + i, for i < count.
template <class T>
void fill_weights_serial(const WeightPlan& plan, const ParamPoint<T>& p, std::int64_t m_begin, std::int64_t count,
                         std::vector<std::vector<T>>& tables) {
  tables.resize(plan.nodes.size());
  for (std::size_t n = 0; n < plan.nodes.size(); ++n) {
    tables[n].resize(count);
    for (std::int64_t i = 0; i < count; ++i) tables[n][i] = node_weight(plan.nodes[n], p, m_begin + i);
  }
}

template <class T>
void fill_weights_omp(const WeightPlan& plan, const ParamPoint<T>& p, std::int64_t m_begin, std::int64_t count,
                      std::vector<std::vector<T>>& tables) {
  tables.resize(plan.nodes.size());
  for (auto& t : tables) t.resize(count);
  const std::int64_t nodes = static_cast<std::int64_t>(plan.nodes.size());
#pragma omp parallel for collapse(2) schedule(static)
  for (std::int64_t n = 0; n < nodes; ++n) {
    for (std::int64_t i = 0; i < count; ++i) tables[n][i] = node_weight(plan.nodes[n], p, m_begin + i);
  }
}

template <class T>
void fill_weights(ExecPolicy policy, const WeightPlan& plan, const ParamPoint<T>& p, std::int64_t m_begin,
                  std::int64_t count, std::vector<std::vector<T>>& tables) {
  if (policy == ExecPolicy::parallel) {
    fill_weights_omp(plan, p, m_begin, count, tables);
  } else {
    fill_weights_serial(plan, p, m_begin, count, tables);
  }
}

/// Tables for the coupled auxiliary series
///   sum P(m_0) Q(m_n) prod_i W_i(m_i) / (m_n - m_0)
/// over m_0 ~ m_1 ~ ... ~ m_n with m_0 < m_n.
template <class T>
struct CoupledTables {
  std::vector<std::vector<T>> weights;  // [position][m]
  std::vector<T> prefix;                // P(m)
  std::vector<T> suffix;                // Q(m)
  std::vector<T> inverse;               // 1/d, inverse[0] unused
  /// links[0] relates m_0 to m_1; links[i] relates m_i to m_{i+1}.
  std::vector<Link> links;
};

/// Contribution of all tuples with m_n = t.  `work` is scratch of size >= t+1.
template <class T>
T coupled_term(const CoupledTables<T>& tab, std::int64_t t, std::vector<T>& work) {
  const int n = static_cast<int>(tab.weights.size());
  for (std::int64_t x = 0; x < t; ++x) work[x] = 0;
  work[t] = tab.weights[n - 1][t];
  T acc;
  T held;
  // Backward sweep: work[x] becomes the sum over tails starting at layer i with m_i = x.
  for (int i = n - 2; i >= 0; --i) {
    const bool weak = tab.links[i + 1] == Link::weak;
    const auto& w = tab.weights[i];
    acc = 0;
    for (std::int64_t x = t; x >= 0; --x) {
      held = work[x];
      if (weak) {
        acc += held;
        work[x] = acc;
      } else {
        work[x] = acc;
        acc += held;
      }
      work[x] *= w[x];
    }
  }
  const bool weak0 = tab.links[0] == Link::weak;
  T total(0);
  T term;
  acc = 0;
  for (std::int64_t x = t; x >= 0; --x) {
    if (weak0) acc += work[x];
    if (x < t) {
      term = tab.prefix[x];
      term *= tab.inverse[t - x];
      term *= acc;
      total += term;
    }
    if (!weak0) acc += work[x];
  }
  total *= tab.suffix[t];
  return total;
}

/// out[t - begin] = coupled_term(t) for begin <= t < end.
template <class T>
void coupled_terms_serial(const CoupledTables<T>& tab, std::int64_t begin, std::int64_t end, std::vector<T>& out) {
  out.resize(end - begin);
  std::vector<T> work(end + 1);
  for (std::int64_t t = begin; t < end; ++t) out[t - begin] = coupled_term(tab, t, work);
}

template <class T>
void coupled_terms_omp(const CoupledTables<T>& tab, std::int64_t begin, std::int64_t end, std::vector<T>& out) {
  out.resize(end - begin);
#pragma omp parallel
  {
    std::vector<T> work(end + 1);
#pragma omp for schedule(dynamic, 8)
    for (std::int64_t t = begin; t < end; ++t) out[t - begin] = coupled_term(tab, t, work);
  }
}

template <class T>
void coupled_terms(ExecPolicy policy, const CoupledTables<T>& tab, std::int64_t begin, std::int64_t end,
                   std::vector<T>& out) {
  if (policy == ExecPolicy::parallel) {
    coupled_terms_omp(tab, begin, end, out);
  } else {
    coupled_terms_serial(tab, begin, end, out);
  }
}

}  // namespace kernels
}  // namespace zetalab
