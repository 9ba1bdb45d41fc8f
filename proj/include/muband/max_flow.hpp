#ifndef MUBAND_MAX_FLOW_HPP
#define MUBAND_MAX_FLOW_HPP

#include <cstdint>
#include <limits>
#include <vector>

#include "muband/errors.hpp"

namespace muband {

// Dinic max-flow on 64-bit integer capacities. Exact: capacities are
// integers, augmentation is integral, and the returned cut value equals
// the flow value by construction. Deterministic for a fixed insertion
// order of arcs.
class MaxFlow {
public:
    static constexpr long long kInfinite = std::numeric_limits<long long>::max() / 4;

    explicit MaxFlow(int nodes) : head_(static_cast<std::size_t>(nodes), -1) {}

    int add_node() {
        head_.push_back(-1);
        return static_cast<int>(head_.size()) - 1;
    }

    void add_edge(int u, int v, long long cap, long long rev_cap = 0) {
        if (cap < 0 || rev_cap < 0) throw DomainError("MaxFlow: negative capacity");
        arcs_.push_back({v, head_[static_cast<std::size_t>(u)], cap});
        head_[static_cast<std::size_t>(u)] = static_cast<int>(arcs_.size()) - 1;
        arcs_.push_back({u, head_[static_cast<std::size_t>(v)], rev_cap});
        head_[static_cast<std::size_t>(v)] = static_cast<int>(arcs_.size()) - 1;
    }

    long long solve(int s, int t) {
        source_ = s;
        sink_ = t;
        long long total = 0;
        while (build_levels()) {
            iter_ = head_;
            long long pushed;
            while ((pushed = augment(s, kInfinite)) > 0) total += pushed;
        }
        return total;
    }

    // Source side of the canonical minimum cut: everything reachable from
    // the source in the residual graph after solve(). This is the unique
    // inclusion-minimal minimizer among all minimum cuts.
    std::vector<char> min_cut_source_side() const {
        std::vector<char> side(head_.size(), 0);
        std::vector<int> stack{source_};
        side[static_cast<std::size_t>(source_)] = 1;
        while (!stack.empty()) {
            const int u = stack.back();
            stack.pop_back();
            for (int a = head_[static_cast<std::size_t>(u)]; a != -1; a = arcs_[static_cast<std::size_t>(a)].next) {
                const Arc& arc = arcs_[static_cast<std::size_t>(a)];
                if (arc.cap > 0 && !side[static_cast<std::size_t>(arc.to)]) {
                    side[static_cast<std::size_t>(arc.to)] = 1;
                    stack.push_back(arc.to);
                }
            }
        }
        return side;
    }

private:
    struct Arc {
        int to;
        int next;
        long long cap;
    };

    bool build_levels() {
        level_.assign(head_.size(), -1);
        std::vector<int> queue{source_};
        level_[static_cast<std::size_t>(source_)] = 0;
        for (std::size_t qi = 0; qi < queue.size(); ++qi) {
            const int u = queue[qi];
            for (int a = head_[static_cast<std::size_t>(u)]; a != -1; a = arcs_[static_cast<std::size_t>(a)].next) {
                const Arc& arc = arcs_[static_cast<std::size_t>(a)];
                if (arc.cap > 0 && level_[static_cast<std::size_t>(arc.to)] < 0) {
                    level_[static_cast<std::size_t>(arc.to)] = level_[static_cast<std::size_t>(u)] + 1;
                    queue.push_back(arc.to);
                }
            }
        }
        return level_[static_cast<std::size_t>(sink_)] >= 0;
    }

    long long augment(int u, long long limit) {
        if (u == sink_) return limit;
        for (int& a = iter_[static_cast<std::size_t>(u)]; a != -1; a = arcs_[static_cast<std::size_t>(a)].next) {
            Arc& arc = arcs_[static_cast<std::size_t>(a)];
            if (arc.cap > 0 && level_[static_cast<std::size_t>(arc.to)] == level_[static_cast<std::size_t>(u)] + 1) {
                const long long pushed = augment(arc.to, std::min(limit, arc.cap));
                if (pushed > 0) {
                    arc.cap -= pushed;
                    arcs_[static_cast<std::size_t>(a ^ 1)].cap += pushed;
                    return pushed;
                }
            }
        }
        level_[static_cast<std::size_t>(u)] = -1;
        return 0;
    }

    std::vector<int> head_;
    std::vector<Arc> arcs_;
    std::vector<int> level_;
    std::vector<int> iter_;
    int source_ = 0;
    int sink_ = 0;
};

} // namespace muband

#endif // MUBAND_MAX_FLOW_HPP
