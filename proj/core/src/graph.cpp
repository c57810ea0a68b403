#include "aggmc/graph.hpp"

#include <algorithm>
#include <numeric>
#include <queue>

#include "aggmc/error.hpp"
#include "aggmc/spectral.hpp"

namespace aggmc {

std::string_view to_string(Classification c) noexcept {
  switch (c) {
    case Classification::Primitive: return "Primitive";
    case Classification::IrreduciblePeriodic: return "IrreduciblePeriodic";
    case Classification::Reducible: return "Reducible";
  }
  return "Unknown";
}

namespace {

std::vector<std::vector<Index>> adjacency(const Matrix& p) {
  std::vector<std::vector<Index>> adj(static_cast<std::size_t>(p.rows()));
  for (Index i = 0; i < p.rows(); ++i)
    for (Index j = 0; j < p.cols(); ++j)
      if (p(i, j) > 0.0) adj[static_cast<std::size_t>(i)].push_back(j);
  return adj;
}

}  // namespace

std::vector<std::vector<Index>> strongly_connected_components(const Matrix& p) {
  // Iterative Tarjan. Components pop out sinks first.
  const auto n = static_cast<std::size_t>(p.rows());
  const auto adj = adjacency(p);
  constexpr Index kUnvisited = -1;
  std::vector<Index> index(n, kUnvisited), low(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<Index> stack;
  std::vector<std::vector<Index>> components;
  Index counter = 0;

  struct Frame {
    Index node;
    std::size_t next_edge;
  };
  for (std::size_t root = 0; root < n; ++root) {
    if (index[root] != kUnvisited) continue;
    std::vector<Frame> call{{static_cast<Index>(root), 0}};
    index[root] = low[root] = counter++;
    stack.push_back(static_cast<Index>(root));
    on_stack[root] = true;
    while (!call.empty()) {
      auto& frame = call.back();
      const auto u = static_cast<std::size_t>(frame.node);
      if (frame.next_edge < adj[u].size()) {
        const auto v = static_cast<std::size_t>(adj[u][frame.next_edge++]);
        if (index[v] == kUnvisited) {
          index[v] = low[v] = counter++;
          stack.push_back(static_cast<Index>(v));
          on_stack[v] = true;
          call.push_back({static_cast<Index>(v), 0});
        } else if (on_stack[v]) {
          low[u] = std::min(low[u], index[v]);
        }
        continue;
      }
      if (low[u] == index[u]) {
        std::vector<Index> component;
        Index w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[static_cast<std::size_t>(w)] = false;
          component.push_back(w);
        } while (w != static_cast<Index>(u));
        std::sort(component.begin(), component.end());
        components.push_back(std::move(component));
      }
      call.pop_back();
      if (!call.empty()) {
        const auto parent = static_cast<std::size_t>(call.back().node);
        low[parent] = std::min(low[parent], low[u]);
      }
    }
  }
  std::reverse(components.begin(), components.end());
  return components;
}

bool is_trivial_component(const Matrix& p, std::span<const Index> component) {
  return component.size() == 1 && !(p(component[0], component[0]) > 0.0);
}

Index component_period(const Matrix& p, std::span<const Index> component) {
  if (component.empty() || is_trivial_component(p, component)) return 0;
  const Index n = p.rows();
  std::vector<bool> member(static_cast<std::size_t>(n), false);
  for (Index s : component) member[static_cast<std::size_t>(s)] = true;

  std::vector<Index> level(static_cast<std::size_t>(n), -1);
  std::queue<Index> frontier;
  level[static_cast<std::size_t>(component[0])] = 0;
  frontier.push(component[0]);
  Index g = 0;
  while (!frontier.empty()) {
    const Index u = frontier.front();
    frontier.pop();
    for (Index v = 0; v < n; ++v) {
      if (!member[static_cast<std::size_t>(v)] || !(p(u, v) > 0.0)) continue;
      auto& lv = level[static_cast<std::size_t>(v)];
      if (lv < 0) {
        lv = level[static_cast<std::size_t>(u)] + 1;
        frontier.push(v);
      } else {
        g = std::gcd(g, level[static_cast<std::size_t>(u)] + 1 - lv);
      }
    }
  }
  return g;
}

StructureReport classify(const Matrix& p) {
  StructureReport report;
  report.scc_partition = strongly_connected_components(p);
  report.is_irreducible =
      report.scc_partition.size() == 1 && !is_trivial_component(p, report.scc_partition[0]);
  if (report.is_irreducible) {
    report.period = component_period(p, report.scc_partition[0]);
    report.is_primitive = *report.period == 1;
    report.classification = report.is_primitive ? Classification::Primitive
                                                : Classification::IrreduciblePeriodic;
  }
  return report;
}

Matrix submatrix(const Matrix& p, std::span<const Index> rows, std::span<const Index> cols) {
  Matrix out(static_cast<Index>(rows.size()), static_cast<Index>(cols.size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j)
      out(static_cast<Index>(i), static_cast<Index>(j)) = p(rows[i], cols[j]);
  return out;
}

std::vector<Index> reachable_from(const Matrix& p, std::span<const Index> sources) {
  const Index n = p.rows();
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  std::vector<Index> todo(sources.begin(), sources.end());
  for (Index s : todo) seen[static_cast<std::size_t>(s)] = true;
  while (!todo.empty()) {
    const Index u = todo.back();
    todo.pop_back();
    for (Index v = 0; v < n; ++v) {
      if (p(u, v) > 0.0 && !seen[static_cast<std::size_t>(v)]) {
        seen[static_cast<std::size_t>(v)] = true;
        todo.push_back(v);
      }
    }
  }
  std::vector<Index> out;
  for (Index i = 0; i < n; ++i)
    if (seen[static_cast<std::size_t>(i)]) out.push_back(i);
  return out;
}

CyclicForm cyclic_normal_form(const Matrix& p) {
  const auto structure = classify(p);
  if (!structure.is_irreducible) throw Error(ErrorCode::NotIrreducible, "cyclic form needs an irreducible matrix");
  const Index h = *structure.period;
  if (h < 2) throw Error(ErrorCode::NotPeriodic, "matrix is aperiodic");

  const Index n = p.rows();
  // BFS levels from state 0; the class of v is level(v) mod h.
  std::vector<Index> level(static_cast<std::size_t>(n), -1);
  std::queue<Index> frontier;
  level[0] = 0;
  frontier.push(0);
  while (!frontier.empty()) {
    const Index u = frontier.front();
    frontier.pop();
    for (Index v = 0; v < n; ++v) {
      if (p(u, v) > 0.0 && level[static_cast<std::size_t>(v)] < 0) {
        level[static_cast<std::size_t>(v)] = level[static_cast<std::size_t>(u)] + 1;
        frontier.push(v);
      }
    }
  }

  CyclicForm form;
  form.period = h;
  form.classes.resize(static_cast<std::size_t>(h));
  for (Index v = 0; v < n; ++v)
    form.classes[static_cast<std::size_t>(level[static_cast<std::size_t>(v)] % h)].push_back(v);

  form.perm.resize(static_cast<std::size_t>(n));
  Index next = 0;
  for (const auto& cls : form.classes)
    for (Index v : cls) form.perm[static_cast<std::size_t>(v)] = next++;

  for (Index c = 0; c < h; ++c) {
    const auto& rows = form.classes[static_cast<std::size_t>(c)];
    const auto& cols = form.classes[static_cast<std::size_t>((c + 1) % h)];
    form.blocks.push_back(submatrix(p, rows, cols));
  }
  form.permuted = permute(p, form.perm);
  return form;
}

ReducibleForm reducible_canonical_form(const Matrix& p) {
  return reducible_canonical_form(p, SpectralOptions{});
}

ReducibleForm reducible_canonical_form(const Matrix& p, const SpectralOptions& options) {
  const auto components = strongly_connected_components(p);
  const Index n = p.rows();

  std::vector<Index> component_of(static_cast<std::size_t>(n));
  for (std::size_t c = 0; c < components.size(); ++c)
    for (Index s : components[c]) component_of[static_cast<std::size_t>(s)] = static_cast<Index>(c);

  ReducibleForm form;
  for (std::size_t c = 0; c < components.size(); ++c) {
    const auto& comp = components[c];
    bool terminal = true;
    for (Index u : comp)
      for (Index v = 0; v < n && terminal; ++v)
        if (p(u, v) > 0.0 && component_of[static_cast<std::size_t>(v)] != static_cast<Index>(c))
          terminal = false;

    if (terminal && !is_trivial_component(p, comp)) {
      form.final_classes.push_back(comp);
    } else {
      form.transient_states.insert(form.transient_states.end(), comp.begin(), comp.end());
      if (!is_trivial_component(p, comp)) {
        const double rho = perron(submatrix(p, comp, comp), options).lambda1;
        form.transient_radius = std::max(form.transient_radius, rho);
      }
    }
  }
  std::sort(form.final_classes.begin(), form.final_classes.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });

  form.perm.resize(static_cast<std::size_t>(n));
  Index next = 0;
  for (Index s : form.transient_states) form.perm[static_cast<std::size_t>(s)] = next++;
  for (const auto& cls : form.final_classes)
    for (Index s : cls) form.perm[static_cast<std::size_t>(s)] = next++;
  form.permuted = permute(p, form.perm);

  form.transient_block = submatrix(p, form.transient_states, form.transient_states);
  for (const auto& cls : form.final_classes) {
    form.coupling_blocks.push_back(submatrix(p, form.transient_states, cls));
    form.final_blocks.push_back(submatrix(p, cls, cls));
    form.perron_values.push_back(perron(form.final_blocks.back(), options).lambda1);
    const std::vector<Index> local = identity_permutation(static_cast<Index>(cls.size()));
    form.final_periods.push_back(component_period(form.final_blocks.back(), local));
  }

  if (!form.perron_values.empty()) {
    form.lambda_max = *std::max_element(form.perron_values.begin(), form.perron_values.end());
    const double tol = options.tol_eig * std::max(1.0, form.lambda_max);
    for (std::size_t j = 0; j < form.perron_values.size(); ++j)
      if (form.lambda_max - form.perron_values[j] <= tol) form.dominating.push_back(static_cast<Index>(j));
  }
  return form;
}

}  // namespace aggmc
