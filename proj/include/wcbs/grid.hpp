#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace wcbs {

// Row-major cell index into a GridMap.
using Location = int;

struct Cell {
  int row = 0;
  int col = 0;
  friend bool operator==(const Cell&, const Cell&) = default;
};

// Thrown for malformed .map / .scen input. what() names the offending line.
class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& message)
      : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

// 4-connected occupancy grid. Immutable once built.
class GridMap {
 public:
  GridMap() = default;
  GridMap(int width, int height, std::vector<std::uint8_t> passable, std::string name = {});

  int width() const { return width_; }
  int height() const { return height_; }
  int cell_count() const { return width_ * height_; }
  const std::string& name() const { return name_; }
  int free_count() const { return free_count_; }

  bool in_bounds(Cell c) const { return c.row >= 0 && c.row < height_ && c.col >= 0 && c.col < width_; }
  bool passable(Location loc) const { return passable_[loc] != 0; }
  bool passable(Cell c) const { return in_bounds(c) && passable_[location(c)] != 0; }

  Location location(Cell c) const { return c.row * width_ + c.col; }
  Cell cell(Location loc) const { return {loc / width_, loc % width_}; }

  // Passable 4-neighbours of loc (no wait move), in the fixed order up, down, left, right.
  int neighbors(Location loc, Location out[4]) const;
  bool adjacent_or_same(Location a, Location b) const;

  const std::vector<std::uint8_t>& passable_cells() const { return passable_; }

  friend bool operator==(const GridMap& a, const GridMap& b) {
    return a.width_ == b.width_ && a.height_ == b.height_ && a.passable_ == b.passable_;
  }

 private:
  int width_ = 0;
  int height_ = 0;
  int free_count_ = 0;
  std::vector<std::uint8_t> passable_;
  std::string name_;
};

struct AgentTask {
  int id = 0;
  Cell start;
  Cell goal;
  int optimal_length = -1;  // stored scenario metadata only
  friend bool operator==(const AgentTask&, const AgentTask&) = default;
};

// MovingAI grid map. '.' and 'G' are passable; '@', 'O', 'T', 'W' are blocked.
GridMap parse_map(std::string_view text, std::string name = {});
std::string serialize_map(const GridMap& map);

// MovingAI scenario, version 1. Rows store (x=col, y=row).
std::vector<AgentTask> parse_scen(std::string_view text);

// Checks every task lies on a passable cell of `map`. Throws std::invalid_argument.
void validate_tasks(const GridMap& map, const std::vector<AgentTask>& tasks);

// Fisher-Yates shuffle driven by std::mt19937_64(seed) with rejection-sampled
// bounded draws, then the first n tasks renumbered 0..n-1.
std::vector<AgentTask> select_agents(const std::vector<AgentTask>& tasks, std::size_t n, std::uint64_t seed);

std::string read_text_file(const std::string& path);
std::string file_stem(const std::string& path);

}  // namespace wcbs
