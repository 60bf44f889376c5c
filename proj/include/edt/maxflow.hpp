#pragma once

#include <limits>
#include <queue>
#include <vector>

namespace edt {

/* Dinic max-flow on a small graph; used for the max-weight-closure
 * reduction of the FSD statistic.  Capacities are doubles; residuals
 * below `eps` count as saturated. */
class Dinic {
  public:
    explicit Dinic(int n, double eps = 1e-11) : n_(n), eps_(eps), head_(n, -1) {}

    void add_edge(int u, int v, double cap) {
        edges_.push_back({v, head_[u], cap});
        head_[u] = static_cast<int>(edges_.size()) - 1;
        edges_.push_back({u, head_[v], 0.0});
        head_[v] = static_cast<int>(edges_.size()) - 1;
    }

    double max_flow(int s, int t) {
        double flow = 0.0;
        while (bfs(s, t)) {
            iter_ = head_;
            double f;
            while ((f = dfs(s, t, std::numeric_limits<double>::infinity())) > eps_) flow += f;
        }
        s_ = s;
        return flow;
    }

    /* After max_flow: nodes reachable from s in the residual graph
     * (the source side of a minimum cut). */
    std::vector<bool> min_cut_source_side() const {
        std::vector<bool> vis(n_, false);
        std::queue<int> q;
        q.push(s_);
        vis[s_] = true;
        while (!q.empty()) {
            int u = q.front();
            q.pop();
            for (int e = head_[u]; e != -1; e = edges_[e].next)
                if (edges_[e].cap > eps_ && !vis[edges_[e].to]) {
                    vis[edges_[e].to] = true;
                    q.push(edges_[e].to);
                }
        }
        return vis;
    }

  private:
    struct Edge {
        int to, next;
        double cap;
    };
    int n_;
    double eps_;
    int s_ = 0;
    std::vector<int> head_, iter_;
    std::vector<int> level_;
    std::vector<Edge> edges_;

    bool bfs(int s, int t) {
        level_.assign(n_, -1);
        std::queue<int> q;
        q.push(s);
        level_[s] = 0;
        while (!q.empty()) {
            int u = q.front();
            q.pop();
            for (int e = head_[u]; e != -1; e = edges_[e].next)
                if (edges_[e].cap > eps_ && level_[edges_[e].to] < 0) {
                    level_[edges_[e].to] = level_[u] + 1;
                    q.push(edges_[e].to);
                }
        }
        return level_[t] >= 0;
    }

    double dfs(int u, int t, double f) {
        if (u == t) return f;
        for (int& e = iter_[u]; e != -1; e = edges_[e].next) {
            auto& ed = edges_[e];
            if (ed.cap > eps_ && level_[ed.to] == level_[u] + 1) {
                double d = dfs(ed.to, t, std::min(f, ed.cap));
                if (d > eps_) {
                    ed.cap -= d;
                    edges_[e ^ 1].cap += d;
                    return d;
                }
            }
        }
        return 0.0;
    }
};

}  // namespace edt
