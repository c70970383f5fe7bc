#pragma once

#include "inhand/geometry.hpp"
#include "inhand/step_schedule.hpp"

#include <array>
#include <atomic>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

namespace inhand {

struct ManifoldEntry {
  double phi;
  Rot3 rotation;
};

struct ManifoldQuery {
  double phi;
  double dist;
  std::size_t index;
};

/// Expanded goal manifold {Rz(phi) * goal : phi in candidate_steps(sigma_r)}
/// with exact nearest-configuration queries under dist_R.
///
/// Entries are embedded as canonical quaternions (both signs stored); a
/// KD-tree over the embedding prunes candidates, which are then re-ranked by
/// exact dist_R. Pruning is sound because the minimum-sign chordal quaternion
/// distance never exceeds (sqrt(3)/2) * dist_R, so the tree path returns
/// exactly what the linear scan returns. Ties break toward the earliest
/// schedule position.
///
/// Immutable after construction; queries are safe from any thread.
class GoalManifoldIndex {
 public:
  GoalManifoldIndex(const Rot3& goal, double sigma_r)
      : goal_(goal), sigma_r_(sigma_r) {
    const StepSchedule schedule = candidate_steps(sigma_r);
    entries_.reserve(schedule.size());
    entry_rpy_.reserve(schedule.size());
    for (double phi : schedule) {
      const Rot3 rot = rot_about_axis(Axis::Z, phi) * goal;
      entries_.push_back({phi, rot});
      entry_rpy_.push_back(rot.rpy());
    }
    points_.reserve(2 * entries_.size());
    for (std::size_t i = 0; i < entries_.size(); ++i) {
      const auto& q = entries_[i].rotation.quaternion();
      const std::array<double, 4> p{q.w(), q.x(), q.y(), q.z()};
      points_.push_back({p, i});
      points_.push_back({{-p[0], -p[1], -p[2], -p[3]}, i});
    }
    nodes_.reserve(2 * points_.size() / kLeafSize + 2);
    root_ = build_node(0, static_cast<int>(points_.size()));
    build_counter_.fetch_add(1, std::memory_order_relaxed);
  }

  const std::vector<ManifoldEntry>& entries() const { return entries_; }
  const Rot3& goal() const { return goal_; }
  double sigma_r() const { return sigma_r_; }

  /// Exact nearest entry under dist_R.
  ManifoldQuery query_closest(const Rot3& r) const {
    return *search(r, std::numeric_limits<double>::infinity());
  }

  /// Exact nearest entry among those with dist_R strictly below `radius`,
  /// or nullopt when no entry qualifies.
  std::optional<ManifoldQuery> query_closest_within(const Rot3& r,
                                                    double radius) const {
    return search(r, radius);
  }

  /// Exhaustive scan in schedule order. Correctness oracle for the tree path.
  ManifoldQuery query_linear(const Rot3& r) const {
    const Vec3 qr = r.rpy();
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_idx = 0;
    for (std::size_t i = 0; i < entries_.size(); ++i) {
      const double d = rpy_dist(qr, entry_rpy_[i]);
      if (d < best) {
        best = d;
        best_idx = i;
      }
    }
    return {entries_[best_idx].phi, best, best_idx};
  }

  /// Total index constructions in this process. Lets tests confirm an index
  /// is reused across replans instead of rebuilt per tick.
  static std::uint64_t build_count() {
    return build_counter_.load(std::memory_order_relaxed);
  }

 private:
  static constexpr int kLeafSize = 8;
  // min-sign chordal distance <= (sqrt(3)/2) * dist_R; small slack for
  // floating-point rounding in the rpy extraction.
  static constexpr double kEmbedFactor = 0.86602540378443871;
  static constexpr double kEmbedSlack = 1e-12;

  struct Point {
    std::array<double, 4> p;
    std::size_t entry;
  };

  struct Node {
    std::array<double, 4> lo{}, hi{};
    int left = -1, right = -1;
    int begin = 0, end = 0;
  };

  int build_node(int begin, int end) {
    Node node;
    node.begin = begin;
    node.end = end;
    node.lo.fill(std::numeric_limits<double>::infinity());
    node.hi.fill(-std::numeric_limits<double>::infinity());
    for (int i = begin; i < end; ++i) {
      for (int d = 0; d < 4; ++d) {
        node.lo[d] = std::min(node.lo[d], points_[i].p[d]);
        node.hi[d] = std::max(node.hi[d], points_[i].p[d]);
      }
    }
    const int id = static_cast<int>(nodes_.size());
    nodes_.push_back(node);
    if (end - begin > kLeafSize) {
      int axis = 0;
      double widest = -1.0;
      for (int d = 0; d < 4; ++d) {
        const double w = node.hi[d] - node.lo[d];
        if (w > widest) {
          widest = w;
          axis = d;
        }
      }
      const int mid = (begin + end) / 2;
      std::nth_element(points_.begin() + begin, points_.begin() + mid,
                       points_.begin() + end,
                       [axis](const Point& a, const Point& b) {
                         return a.p[axis] < b.p[axis];
                       });
      const int l = build_node(begin, mid);
      const int r = build_node(mid, end);
      nodes_[id].left = l;
      nodes_[id].right = r;
    }
    return id;
  }

  static double box_dist_sq(const Node& n, const std::array<double, 4>& q) {
    double s = 0.0;
    for (int d = 0; d < 4; ++d) {
      double v = 0.0;
      if (q[d] < n.lo[d]) v = n.lo[d] - q[d];
      else if (q[d] > n.hi[d]) v = q[d] - n.hi[d];
      s += v * v;
    }
    return s;
  }

  struct SearchState {
    std::array<double, 4> q;
    Vec3 qr;
    double best_dist;
    std::size_t best_idx = std::numeric_limits<std::size_t>::max();
    bool found = false;
  };

  double prune_radius(const SearchState& s) const {
    return kEmbedFactor * s.best_dist * (1.0 + 1e-9) + kEmbedSlack;
  }

  void search_node(int id, SearchState& s) const {
    const Node& node = nodes_[id];
    const double r = prune_radius(s);
    if (box_dist_sq(node, s.q) > r * r) return;
    if (node.left < 0) {
      for (int i = node.begin; i < node.end; ++i) {
        const Point& pt = points_[i];
        double ed = 0.0;
        for (int d = 0; d < 4; ++d) {
          const double v = pt.p[d] - s.q[d];
          ed += v * v;
        }
        const double rr = prune_radius(s);
        if (ed > rr * rr) continue;
        const double dist = rpy_dist(s.qr, entry_rpy_[pt.entry]);
        if (dist < s.best_dist ||
            (s.found && dist == s.best_dist && pt.entry < s.best_idx)) {
          s.best_dist = dist;
          s.best_idx = pt.entry;
          s.found = true;
        }
      }
      return;
    }
    const double dl = box_dist_sq(nodes_[node.left], s.q);
    const double dr = box_dist_sq(nodes_[node.right], s.q);
    if (dl <= dr) {
      search_node(node.left, s);
      search_node(node.right, s);
    } else {
      search_node(node.right, s);
      search_node(node.left, s);
    }
  }

  std::optional<ManifoldQuery> search(const Rot3& r, double radius) const {
    SearchState s;
    const auto& q = r.quaternion();
    s.q = {q.w(), q.x(), q.y(), q.z()};
    s.qr = r.rpy();
    s.best_dist = radius;
    search_node(root_, s);
    if (!s.found) return std::nullopt;
    return ManifoldQuery{entries_[s.best_idx].phi, s.best_dist, s.best_idx};
  }

  Rot3 goal_;
  double sigma_r_;
  std::vector<ManifoldEntry> entries_;
  std::vector<Vec3> entry_rpy_;
  std::vector<Point> points_;
  std::vector<Node> nodes_;
  int root_ = 0;

  static inline std::atomic<std::uint64_t> build_counter_{0};
};

inline GoalManifoldIndex build_goal_manifold(const Rot3& goal, double sigma_r) {
  return GoalManifoldIndex(goal, sigma_r);
}

/// (phi, dist) of the exact nearest manifold entry.
inline std::pair<double, double> query_closest(const GoalManifoldIndex& index,
                                               const Rot3& r) {
  const ManifoldQuery q = index.query_closest(r);
  return {q.phi, q.dist};
}

}  // namespace inhand
