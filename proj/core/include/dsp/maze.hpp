#pragma once

#include <array>
#include <concepts>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace dsp {

inline constexpr int kMazeSize = 29;
inline constexpr int kFinalCount = 8;
inline constexpr int kMaxSteps = 100;
inline constexpr double kPitPenalty = 5.0;

enum class Cell : std::uint8_t { Empty, Wall, Start, Final };

struct Coord {
    int x = 0;
    int y = 0;
    friend constexpr bool operator==(Coord, Coord) noexcept = default;
};

// Clockwise order: turning right is +1, turning left is -1 (mod 4).
enum class Orientation : std::uint8_t { North, East, South, West };

enum class Action : std::uint8_t { Stop, Left, Right, Straight };

struct Pose {
    Coord pos;
    Orientation facing = Orientation::North;
    friend constexpr bool operator==(const Pose&, const Pose&) noexcept = default;
};

/// One bit per orientation-relative neighbour: 1 means wall. Goal, pit and
/// start cells all read as 0, the agent cannot tell them from empty floor.
struct SensorReading {
    std::uint8_t left = 0;
    std::uint8_t front = 0;
    std::uint8_t right = 0;
    friend constexpr bool operator==(SensorReading, SensorReading) noexcept = default;
};

[[nodiscard]] constexpr Orientation turn_left(Orientation o) noexcept {
    return static_cast<Orientation>((static_cast<int>(o) + 3) % 4);
}
[[nodiscard]] constexpr Orientation turn_right(Orientation o) noexcept {
    return static_cast<Orientation>((static_cast<int>(o) + 1) % 4);
}
[[nodiscard]] constexpr Coord step_towards(Coord c, Orientation o) noexcept {
    switch (o) {
    case Orientation::North: return {c.x, c.y - 1};
    case Orientation::East: return {c.x + 1, c.y};
    case Orientation::South: return {c.x, c.y + 1};
    case Orientation::West: return {c.x - 1, c.y};
    }
    return c;
}

/// Rectangular cell grid. Out-of-bounds reads are walls.
class Grid {
public:
    Grid(int width, int height, std::vector<Cell> cells);

    [[nodiscard]] int width() const noexcept { return width_; }
    [[nodiscard]] int height() const noexcept { return height_; }
    [[nodiscard]] bool in_bounds(Coord c) const noexcept {
        return c.x >= 0 && c.y >= 0 && c.x < width_ && c.y < height_;
    }
    [[nodiscard]] Cell at(Coord c) const noexcept {
        return in_bounds(c) ? cells_[static_cast<std::size_t>(c.y * width_ + c.x)] : Cell::Wall;
    }
    [[nodiscard]] bool is_wall(Coord c) const noexcept { return at(c) == Cell::Wall; }

private:
    int width_;
    int height_;
    std::vector<Cell> cells_;
};

/// Length of the shortest 4-connected wall-avoiding path (A* with the
/// Manhattan heuristic). std::nullopt when no path exists.
[[nodiscard]] std::optional<int> shortest_path_distance(const Grid& grid, Coord from, Coord to);

/// Which final cell is the goal; the other seven act as pits.
class GoalConfig {
public:
    constexpr explicit GoalConfig(int index) : index_(index) {
        if (index < 1 || index > kFinalCount) throw std::out_of_range("goal index must be in 1..8");
    }
    [[nodiscard]] constexpr int index() const noexcept { return index_; }
    friend constexpr bool operator==(GoalConfig, GoalConfig) noexcept = default;

private:
    int index_;
};

class Maze {
public:
    /// Validates the maze invariants and throws std::invalid_argument on violation.
    Maze(Grid grid, Pose start, std::array<Coord, kFinalCount> finals);

    [[nodiscard]] const Grid& grid() const noexcept { return grid_; }
    [[nodiscard]] Pose start_pose() const noexcept { return start_; }
    [[nodiscard]] Coord final_cell(GoalConfig goal) const noexcept {
        return finals_[static_cast<std::size_t>(goal.index() - 1)];
    }
    [[nodiscard]] const std::array<Coord, kFinalCount>& finals() const noexcept { return finals_; }
    /// 1..8 for final cells, 0 elsewhere.
    [[nodiscard]] int final_index_at(Coord c) const noexcept;
    /// A* distance from the given cell to the goal's final cell.
    [[nodiscard]] int distance_to_goal(Coord from, GoalConfig goal) const;

private:
    Grid grid_;
    Pose start_;
    std::array<Coord, kFinalCount> finals_;
    // distance fields per final cell, filled from A* at construction
    std::array<std::vector<int>, kFinalCount> distance_;
};

enum class MazeErrorKind {
    Dimensions,
    UnknownCharacter,
    DuplicateStart,
    MissingStart,
    DuplicateFinal,
    MissingFinal,
    OpenBorder,
    Unreachable,
};

class MazeParseError : public std::runtime_error {
public:
    MazeParseError(MazeErrorKind kind, int line, int column, const std::string& what);
    [[nodiscard]] MazeErrorKind kind() const noexcept { return kind_; }
    /// 1-based; 0 when the error concerns the whole file.
    [[nodiscard]] int line() const noexcept { return line_; }
    [[nodiscard]] int column() const noexcept { return column_; }

private:
    MazeErrorKind kind_;
    int line_;
    int column_;
};

/// Parses the 29x29 text format: '#' wall, '.' empty, 'S' start, '1'..'8' final.
/// The start orientation is North.
[[nodiscard]] Maze parse_maze(std::string_view text);
[[nodiscard]] Maze load_maze(const std::string& path);

[[nodiscard]] SensorReading sense(const Maze& maze, const Pose& pose) noexcept;
[[nodiscard]] Pose apply_action(const Maze& maze, const Pose& pose, Action action) noexcept;

struct EpisodeTrace {
    int steps_taken = 0;
    bool goal_reached = false;
    int pit_entries = 0;
    Pose final_pose;
};

template <class C>
concept Controller = requires(C c, const Pose& p, const SensorReading& s) {
    { c(p, s) } -> std::convertible_to<Action>;
};

/// sense -> controller -> apply_action, until the goal is reached or
/// max_steps actions have been taken. A pit entry is counted whenever the
/// agent moves onto a pit cell; standing on one does not count again.
template <Controller C>
EpisodeTrace run_episode(const Maze& maze, GoalConfig goal, C&& controller, int max_steps = kMaxSteps) {
    EpisodeTrace trace;
    Pose pose = maze.start_pose();
    const Coord goal_cell = maze.final_cell(goal);
    for (int step = 0; step < max_steps; ++step) {
        const SensorReading reading = sense(maze, pose);
        const Action action = controller(pose, reading);
        const Pose next = apply_action(maze, pose, action);
        ++trace.steps_taken;
        if (next.pos != pose.pos) {
            const int f = maze.final_index_at(next.pos);
            if (f != 0 && f != goal.index()) ++trace.pit_entries;
        }
        pose = next;
        if (pose.pos == goal_cell) {
            trace.goal_reached = true;
            break;
        }
    }
    trace.final_pose = pose;
    return trace;
}

/// Minimised score of one episode: steps to goal if reached, otherwise
/// max steps plus the remaining A* distance; 5 added per pit entry.
[[nodiscard]] double episodic_performance(const EpisodeTrace& trace, const Maze& maze, GoalConfig goal,
                                          int max_steps = kMaxSteps);

} // namespace dsp
