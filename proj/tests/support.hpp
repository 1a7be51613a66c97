#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <optional>
#include <string>
#include <vector>

#include "dsp/maze.hpp"
#include "dsp/rnn.hpp"

namespace dsp::test {

inline std::string data_path(const std::string& name) { return std::string(DSP_TEST_DATA_DIR) + "/" + name; }

inline Grid grid_from_rows(const std::vector<std::string>& rows) {
    std::vector<Cell> cells;
    for (const auto& r : rows)
        for (char ch : r) cells.push_back(ch == '#' ? Cell::Wall : Cell::Empty);
    return Grid(static_cast<int>(rows.front().size()), static_cast<int>(rows.size()), std::move(cells));
}

inline std::optional<int> bfs_distance(const Grid& g, Coord from, Coord to) {
    if (g.is_wall(from) || g.is_wall(to)) return std::nullopt;
    std::vector<int> dist(static_cast<std::size_t>(g.width() * g.height()), -1);
    const auto at = [&](Coord c) -> int& { return dist[static_cast<std::size_t>(c.y * g.width() + c.x)]; };
    std::deque<Coord> q{from};
    at(from) = 0;
    while (!q.empty()) {
        const Coord c = q.front();
        q.pop_front();
        if (c == to) return at(c);
        for (Coord n : {Coord{c.x + 1, c.y}, Coord{c.x - 1, c.y}, Coord{c.x, c.y + 1}, Coord{c.x, c.y - 1}}) {
            if (g.is_wall(n) || at(n) >= 0) continue;
            at(n) = at(c) + 1;
            q.push_back(n);
        }
    }
    return std::nullopt;
}

/// Two-sided rank-sum p-value by listing every way to pick |a| of the pooled
/// values as the first sample.
inline double permutation_rank_sum_p(const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> pooled(a);
    pooled.insert(pooled.end(), b.begin(), b.end());
    std::vector<double> ranks;
    for (double v : pooled) {
        const auto less = std::count_if(pooled.begin(), pooled.end(), [&](double x) { return x < v; });
        const auto equal = std::count(pooled.begin(), pooled.end(), v);
        ranks.push_back(1.0 + static_cast<double>(less) + static_cast<double>(equal - 1) / 2.0);
    }
    double observed = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) observed += ranks[i];

    const std::size_t n = pooled.size();
    std::vector<bool> pick(n, false);
    std::fill(pick.begin(), pick.begin() + static_cast<long>(a.size()), true);
    std::sort(pick.begin(), pick.end());
    double total = 0.0, le = 0.0, ge = 0.0;
    do {
        double w = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            if (pick[i]) w += ranks[i];
        total += 1.0;
        if (w <= observed + 1e-9) le += 1.0;
        if (w >= observed - 1e-9) ge += 1.0;
    } while (std::next_permutation(pick.begin(), pick.end()));
    return std::min(1.0, 2.0 * std::min(le, ge) / total);
}

/// Euclidean norms of every neuron's incoming vector.
inline std::vector<double> incoming_norms(const RnnWeights& w) {
    std::vector<double> out;
    const auto s = w.synapses();
    for (const auto& g : incoming_groups(w.dims())) {
        double sq = 0.0;
        for (auto i : g) sq += s[i] * s[i];
        out.push_back(std::sqrt(sq));
    }
    return out;
}

} // namespace dsp::test
