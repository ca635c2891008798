#include "padyn/dynamics.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_map>

namespace padyn {

std::size_t FunctionalGraph::index_of(const Point& pt) const {
  auto it = std::lower_bound(nodes.begin(), nodes.end(), pt);
  if (it == nodes.end() || !(*it == pt)) throw Error(ErrorCode::InvalidArgument, "point is not a graph node");
  return static_cast<std::size_t>(it - nodes.begin());
}

FunctionalGraph build_graph(std::vector<Point> nodes, std::vector<std::size_t> successor) {
  FunctionalGraph g;
  const std::size_t n = nodes.size();
  g.nodes = std::move(nodes);
  g.successor = std::move(successor);
  g.tail_length.assign(n, 0);
  g.eventual_period.assign(n, 0);
  g.cycle_of.assign(n, 0);

  enum : unsigned char { Fresh, OnPath, Done };
  std::vector<unsigned char> state(n, Fresh);
  std::vector<std::vector<std::size_t>> raw_cycles;
  std::vector<std::size_t> path;
  for (std::size_t start = 0; start < n; ++start) {
    if (state[start] != Fresh) continue;
    path.clear();
    std::size_t cur = start;
    while (state[cur] == Fresh) {
      state[cur] = OnPath;
      path.push_back(cur);
      cur = g.successor[cur];
    }
    std::size_t tail_end = path.size();
    if (state[cur] == OnPath) {
      auto pos = std::find(path.begin(), path.end(), cur);
      std::vector<std::size_t> cyc(pos, path.end());
      std::rotate(cyc.begin(), std::min_element(cyc.begin(), cyc.end()), cyc.end());
      const std::size_t id = raw_cycles.size();
      for (auto v : cyc) {
        g.tail_length[v] = 0;
        g.eventual_period[v] = cyc.size();
        g.cycle_of[v] = id;
        state[v] = Done;
      }
      raw_cycles.push_back(std::move(cyc));
      tail_end = static_cast<std::size_t>(pos - path.begin());
    }
    for (std::size_t i = tail_end; i-- > 0;) {
      const std::size_t v = path[i], next = g.successor[v];
      g.tail_length[v] = g.tail_length[next] + 1;
      g.eventual_period[v] = g.eventual_period[next];
      g.cycle_of[v] = g.cycle_of[next];
      state[v] = Done;
    }
  }
  std::vector<std::size_t> order(raw_cycles.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (raw_cycles[a].size() != raw_cycles[b].size()) return raw_cycles[a].size() < raw_cycles[b].size();
    return raw_cycles[a].front() < raw_cycles[b].front();
  });
  std::vector<std::size_t> rename(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    rename[order[i]] = i;
    g.cycles.push_back(std::move(raw_cycles[order[i]]));
  }
  for (auto& c : g.cycle_of) c = rename.empty() ? 0 : rename[c];
  return g;
}

FunctionalGraph build_functional_graph(const Model& model) {
  const ModRing f(model.p(), 1);
  std::vector<Point> nodes;
  for (auto& q : enumerate_special_fiber(model)) nodes.push_back(std::move(q.point));
  const auto ev = model.evaluator(f);
  std::unordered_map<Point, std::size_t, PointHash> index;
  for (std::size_t i = 0; i < nodes.size(); ++i) index.emplace(nodes[i], i);
  std::vector<std::size_t> succ(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    auto it = index.find(ev.apply(nodes[i]));
    if (it == index.end())
      throw Error(ErrorCode::ModelRejected, "reduced map leaves the special fiber at " +
                                                describe(nodes[i], model.kind()));
    succ[i] = it->second;
  }
  return build_graph(std::move(nodes), std::move(succ));
}

std::vector<CycleInfo> cycle_decomposition(const FunctionalGraph& g) {
  std::vector<CycleInfo> out;
  for (const auto& c : g.cycles) {
    CycleInfo info{{}, c.size()};
    for (auto v : c) info.points.push_back(g.nodes[v]);
    out.push_back(std::move(info));
  }
  return out;
}

ResidualData residual_data(const FunctionalGraph& g, const Point& q) {
  const std::size_t i = g.index_of(q);
  return {g.tail_length[i], g.eventual_period[i]};
}

}  // namespace padyn
