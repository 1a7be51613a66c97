#include "dsp/maze.hpp"

#include <cstdlib>
#include <fstream>
#include <functional>
#include <queue>
#include <sstream>
#include <tuple>

namespace dsp {

Grid::Grid(int width, int height, std::vector<Cell> cells)
    : width_(width), height_(height), cells_(std::move(cells)) {
    if (width <= 0 || height <= 0 || cells_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height))
        throw std::invalid_argument("grid dimensions do not match cell count");
}

std::optional<int> shortest_path_distance(const Grid& grid, Coord from, Coord to) {
    if (grid.is_wall(from) || grid.is_wall(to)) return std::nullopt;
    if (from == to) return 0;

    const auto index = [&](Coord c) { return static_cast<std::size_t>(c.y * grid.width() + c.x); };
    const auto heuristic = [&](Coord c) { return std::abs(c.x - to.x) + std::abs(c.y - to.y); };

    constexpr int kUnseen = -1;
    std::vector<int> g(static_cast<std::size_t>(grid.width() * grid.height()), kUnseen);
    std::vector<bool> closed(g.size(), false);

    // (f, g, x, y); ties on f prefer the larger g, which goes deeper first
    using Entry = std::tuple<int, int, int, int>;
    const auto cmp = [](const Entry& a, const Entry& b) {
        if (std::get<0>(a) != std::get<0>(b)) return std::get<0>(a) > std::get<0>(b);
        return std::get<1>(a) < std::get<1>(b);
    };
    std::priority_queue<Entry, std::vector<Entry>, decltype(cmp)> open(cmp);

    g[index(from)] = 0;
    open.emplace(heuristic(from), 0, from.x, from.y);
    while (!open.empty()) {
        const auto [f, cost, x, y] = open.top();
        open.pop();
        const Coord c{x, y};
        if (closed[index(c)]) continue;
        if (c == to) return cost;
        closed[index(c)] = true;
        for (auto o : {Orientation::North, Orientation::East, Orientation::South, Orientation::West}) {
            const Coord n = step_towards(c, o);
            if (grid.is_wall(n) || closed[index(n)]) continue;
            const int tentative = cost + 1;
            int& best = g[index(n)];
            if (best == kUnseen || tentative < best) {
                best = tentative;
                open.emplace(tentative + heuristic(n), tentative, n.x, n.y);
            }
        }
    }
    return std::nullopt;
}

Maze::Maze(Grid grid, Pose start, std::array<Coord, kFinalCount> finals)
    : grid_(std::move(grid)), start_(start), finals_(finals) {
    if (grid_.at(start_.pos) != Cell::Start) throw std::invalid_argument("start pose is not on the start cell");
    for (const auto& f : finals_)
        if (grid_.at(f) != Cell::Final) throw std::invalid_argument("final coordinate is not a final cell");

    const auto cells = static_cast<std::size_t>(grid_.width() * grid_.height());
    for (std::size_t k = 0; k < finals_.size(); ++k) {
        auto& field = distance_[k];
        field.assign(cells, -1);
        for (int y = 0; y < grid_.height(); ++y)
            for (int x = 0; x < grid_.width(); ++x) {
                const Coord c{x, y};
                if (grid_.is_wall(c)) continue;
                if (auto d = shortest_path_distance(grid_, c, finals_[k]))
                    field[static_cast<std::size_t>(y * grid_.width() + x)] = *d;
            }
        if (field[static_cast<std::size_t>(start_.pos.y * grid_.width() + start_.pos.x)] < 0)
            throw std::invalid_argument("final cell " + std::to_string(k + 1) + " is unreachable from start");
    }
}

int Maze::final_index_at(Coord c) const noexcept {
    if (grid_.at(c) != Cell::Final) return 0;
    for (std::size_t k = 0; k < finals_.size(); ++k)
        if (finals_[k] == c) return static_cast<int>(k) + 1;
    return 0;
}

int Maze::distance_to_goal(Coord from, GoalConfig goal) const {
    if (!grid_.in_bounds(from)) throw std::out_of_range("coordinate outside maze");
    const int d = distance_[static_cast<std::size_t>(goal.index() - 1)]
                           [static_cast<std::size_t>(from.y * grid_.width() + from.x)];
    if (d < 0) throw std::invalid_argument("no path to goal");
    return d;
}

MazeParseError::MazeParseError(MazeErrorKind kind, int line, int column, const std::string& what)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what
                                  : what),
      kind_(kind), line_(line), column_(column) {}

Maze parse_maze(std::string_view text) {
    std::vector<std::string_view> lines;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        if (nl == std::string_view::npos) {
            lines.push_back(text);
            break;
        }
        lines.push_back(text.substr(0, nl));
        text.remove_prefix(nl + 1);
    }

    for (std::size_t i = 0; i < lines.size() && i < static_cast<std::size_t>(kMazeSize); ++i) {
        if (lines[i].size() != static_cast<std::size_t>(kMazeSize))
            throw MazeParseError(MazeErrorKind::Dimensions, static_cast<int>(i) + 1,
                                 static_cast<int>(std::min(lines[i].size(), static_cast<std::size_t>(kMazeSize))) + 1,
                                 "expected " + std::to_string(kMazeSize) + " columns, found " +
                                     std::to_string(lines[i].size()));
    }
    if (lines.size() != static_cast<std::size_t>(kMazeSize))
        throw MazeParseError(MazeErrorKind::Dimensions, static_cast<int>(std::min(lines.size(), static_cast<std::size_t>(kMazeSize))) + 1, 1,
                             "expected " + std::to_string(kMazeSize) + " lines, found " + std::to_string(lines.size()));

    std::vector<Cell> cells;
    cells.reserve(static_cast<std::size_t>(kMazeSize * kMazeSize));
    std::optional<Coord> start;
    std::array<std::optional<Coord>, kFinalCount> finals;

    for (int y = 0; y < kMazeSize; ++y) {
        for (int x = 0; x < kMazeSize; ++x) {
            const char ch = lines[static_cast<std::size_t>(y)][static_cast<std::size_t>(x)];
            Cell cell{};
            if (ch == '#') {
                cell = Cell::Wall;
            } else if (ch == '.') {
                cell = Cell::Empty;
            } else if (ch == 'S') {
                if (start)
                    throw MazeParseError(MazeErrorKind::DuplicateStart, y + 1, x + 1, "duplicate start cell 'S'");
                start = Coord{x, y};
                cell = Cell::Start;
            } else if (ch >= '1' && ch <= '8') {
                auto& slot = finals[static_cast<std::size_t>(ch - '1')];
                if (slot)
                    throw MazeParseError(MazeErrorKind::DuplicateFinal, y + 1, x + 1,
                                         std::string("duplicate final cell '") + ch + "'");
                slot = Coord{x, y};
                cell = Cell::Final;
            } else {
                throw MazeParseError(MazeErrorKind::UnknownCharacter, y + 1, x + 1,
                                     std::string("unknown character '") + ch + "'");
            }
            const bool border = x == 0 || y == 0 || x == kMazeSize - 1 || y == kMazeSize - 1;
            if (border && cell != Cell::Wall)
                throw MazeParseError(MazeErrorKind::OpenBorder, y + 1, x + 1, "border cell must be a wall");
            cells.push_back(cell);
        }
    }

    if (!start) throw MazeParseError(MazeErrorKind::MissingStart, 0, 0, "missing start cell 'S'");
    std::string missing;
    for (std::size_t k = 0; k < finals.size(); ++k)
        if (!finals[k]) missing += (missing.empty() ? "" : ",") + std::to_string(k + 1);
    if (!missing.empty()) throw MazeParseError(MazeErrorKind::MissingFinal, 0, 0, "missing final cells " + missing);

    Grid grid(kMazeSize, kMazeSize, std::move(cells));
    std::array<Coord, kFinalCount> final_cells{};
    for (std::size_t k = 0; k < finals.size(); ++k) {
        final_cells[k] = *finals[k];
        if (!shortest_path_distance(grid, *start, final_cells[k]))
            throw MazeParseError(MazeErrorKind::Unreachable, final_cells[k].y + 1, final_cells[k].x + 1,
                                 "final cell " + std::to_string(k + 1) + " is unreachable from start");
    }
    return Maze(std::move(grid), Pose{*start, Orientation::North}, final_cells);
}

Maze load_maze(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open maze file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_maze(buf.str());
}

SensorReading sense(const Maze& maze, const Pose& pose) noexcept {
    const auto& g = maze.grid();
    const auto bit = [&](Orientation o) -> std::uint8_t { return g.is_wall(step_towards(pose.pos, o)) ? 1 : 0; };
    return {bit(turn_left(pose.facing)), bit(pose.facing), bit(turn_right(pose.facing))};
}

Pose apply_action(const Maze& maze, const Pose& pose, Action action) noexcept {
    Pose next = pose;
    switch (action) {
    case Action::Stop: return next;
    case Action::Left: next.facing = turn_left(pose.facing); break;
    case Action::Right: next.facing = turn_right(pose.facing); break;
    case Action::Straight: break;
    }
    // a blocked move keeps the new orientation but not the move
    const Coord target = step_towards(pose.pos, next.facing);
    if (!maze.grid().is_wall(target)) next.pos = target;
    return next;
}

double episodic_performance(const EpisodeTrace& trace, const Maze& maze, GoalConfig goal, int max_steps) {
    const double pits = kPitPenalty * trace.pit_entries;
    if (trace.goal_reached) return trace.steps_taken + pits;
    return max_steps + maze.distance_to_goal(trace.final_pose.pos, goal) + pits;
}

} // namespace dsp
