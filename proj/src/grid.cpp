#include "wcbs/grid.hpp"

#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>

namespace wcbs {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r' || s.back() == '\n')) s.remove_suffix(1);
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  return s;
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) {
      if (pos < text.size()) lines.push_back(text.substr(pos));
      break;
    }
    lines.push_back(text.substr(pos, end - pos));
    pos = end + 1;
  }
  return lines;
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t' && s[j] != '\r') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

template <typename T>
bool parse_number(std::string_view s, T& out) {
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

int header_value(std::string_view line, std::string_view key, int line_no) {
  auto parts = split_ws(line);
  if (parts.size() != 2 || parts[0] != key) throw ParseError(line_no, "expected '" + std::string(key) + " N'");
  int v = 0;
  if (!parse_number(parts[1], v) || v <= 0) throw ParseError(line_no, "invalid " + std::string(key));
  return v;
}

}  // namespace

GridMap::GridMap(int width, int height, std::vector<std::uint8_t> passable, std::string name)
    : width_(width), height_(height), passable_(std::move(passable)), name_(std::move(name)) {
  if (width <= 0 || height <= 0) throw std::invalid_argument("grid dimensions must be positive");
  if (passable_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height))
    throw std::invalid_argument("passability vector size does not match dimensions");
  for (auto p : passable_) free_count_ += p != 0;
}

int GridMap::neighbors(Location loc, Location out[4]) const {
  const int r = loc / width_;
  const int c = loc % width_;
  int n = 0;
  if (r > 0 && passable_[loc - width_]) out[n++] = loc - width_;
  if (r + 1 < height_ && passable_[loc + width_]) out[n++] = loc + width_;
  if (c > 0 && passable_[loc - 1]) out[n++] = loc - 1;
  if (c + 1 < width_ && passable_[loc + 1]) out[n++] = loc + 1;
  return n;
}

bool GridMap::adjacent_or_same(Location a, Location b) const {
  if (a == b) return true;
  const Cell ca = cell(a);
  const Cell cb = cell(b);
  return std::abs(ca.row - cb.row) + std::abs(ca.col - cb.col) == 1;
}

GridMap parse_map(std::string_view text, std::string name) {
  auto lines = split_lines(text);
  std::size_t i = 0;
  auto next_line = [&](const char* what) -> std::string_view {
    if (i >= lines.size()) throw ParseError(static_cast<int>(i) + 1, std::string("missing ") + what);
    return lines[i++];
  };

  auto type_line = split_ws(next_line("type header"));
  if (type_line.size() != 2 || type_line[0] != "type") throw ParseError(1, "expected 'type <name>'");
  const int height = header_value(next_line("height header"), "height", 2);
  const int width = header_value(next_line("width header"), "width", 3);
  if (trim(next_line("'map' line")) != "map") throw ParseError(4, "expected 'map'");

  std::vector<std::uint8_t> passable;
  passable.reserve(static_cast<std::size_t>(width) * height);
  for (int r = 0; r < height; ++r) {
    const int line_no = static_cast<int>(i) + 1;
    if (i >= lines.size()) throw ParseError(line_no, "expected " + std::to_string(height) + " map rows, got " + std::to_string(r));
    auto row = trim(lines[i++]);
    if (static_cast<int>(row.size()) != width)
      throw ParseError(line_no, "row length " + std::to_string(row.size()) + " != width " + std::to_string(width));
    for (char ch : row) {
      switch (ch) {
        case '.':
        case 'G':
          passable.push_back(1);
          break;
        case '@':
        case 'O':
        case 'T':
        case 'W':
          passable.push_back(0);
          break;
        default:
          throw ParseError(line_no, std::string("unknown map symbol '") + ch + "'");
      }
    }
  }
  for (; i < lines.size(); ++i)
    if (!trim(lines[i]).empty()) throw ParseError(static_cast<int>(i) + 1, "unexpected content after map rows");

  return GridMap(width, height, std::move(passable), std::move(name));
}

std::string serialize_map(const GridMap& map) {
  std::string out = "type octile\nheight " + std::to_string(map.height()) + "\nwidth " + std::to_string(map.width()) + "\nmap\n";
  for (int r = 0; r < map.height(); ++r) {
    for (int c = 0; c < map.width(); ++c) out.push_back(map.passable(Cell{r, c}) ? '.' : '@');
    out.push_back('\n');
  }
  return out;
}

std::vector<AgentTask> parse_scen(std::string_view text) {
  auto lines = split_lines(text);
  if (lines.empty()) throw ParseError(1, "missing 'version 1' header");
  auto header = split_ws(lines[0]);
  if (header.size() != 2 || header[0] != "version" || (header[1] != "1" && header[1] != "1.0"))
    throw ParseError(1, "missing 'version 1' header");

  std::vector<AgentTask> tasks;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const int line_no = static_cast<int>(i) + 1;
    if (trim(lines[i]).empty()) continue;
    // Tab-separated; the map name may itself contain spaces, so split on tabs first.
    std::vector<std::string_view> f;
    auto line = trim(lines[i]);
    if (line.find('\t') != std::string_view::npos) {
      std::size_t pos = 0;
      while (true) {
        auto end = line.find('\t', pos);
        f.push_back(trim(line.substr(pos, end == std::string_view::npos ? std::string_view::npos : end - pos)));
        if (end == std::string_view::npos) break;
        pos = end + 1;
      }
    } else {
      f = split_ws(line);
    }
    if (f.size() != 9) throw ParseError(line_no, "expected 9 fields, got " + std::to_string(f.size()));

    int bucket = 0, width = 0, height = 0, sx = 0, sy = 0, gx = 0, gy = 0;
    double opt = 0.0;
    if (!parse_number(f[0], bucket) || !parse_number(f[2], width) || !parse_number(f[3], height) ||
        !parse_number(f[4], sx) || !parse_number(f[5], sy) || !parse_number(f[6], gx) || !parse_number(f[7], gy))
      throw ParseError(line_no, "non-numeric field");
    {
      auto [ptr, ec] = std::from_chars(f[8].data(), f[8].data() + f[8].size(), opt);
      if (ec != std::errc() || ptr != f[8].data() + f[8].size()) throw ParseError(line_no, "non-numeric optimal length");
    }
    if (width <= 0 || height <= 0) throw ParseError(line_no, "non-positive declared dimensions");
    if (sx < 0 || sx >= width || gx < 0 || gx >= width || sy < 0 || sy >= height || gy < 0 || gy >= height)
      throw ParseError(line_no, "coordinates out of bounds for declared dimensions");

    AgentTask t;
    t.id = static_cast<int>(tasks.size());
    t.start = Cell{sy, sx};
    t.goal = Cell{gy, gx};
    t.optimal_length = static_cast<int>(opt + 0.5);
    tasks.push_back(t);
  }
  return tasks;
}

void validate_tasks(const GridMap& map, const std::vector<AgentTask>& tasks) {
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    const auto& t = tasks[i];
    if (t.id != static_cast<int>(i)) throw std::invalid_argument("task ids must be 0..n-1 in order");
    if (!map.passable(t.start)) throw std::invalid_argument("agent " + std::to_string(i) + " start is not passable");
    if (!map.passable(t.goal)) throw std::invalid_argument("agent " + std::to_string(i) + " goal is not passable");
  }
}

std::vector<AgentTask> select_agents(const std::vector<AgentTask>& tasks, std::size_t n, std::uint64_t seed) {
  if (n > tasks.size())
    throw std::invalid_argument("requested " + std::to_string(n) + " agents but only " + std::to_string(tasks.size()) + " tasks");
  std::vector<AgentTask> shuffled = tasks;
  std::mt19937_64 rng(seed);
  auto bounded = [&rng](std::uint64_t bound) {
    // Unbiased draw in [0, bound).
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t x;
    do x = rng();
    while (x >= limit);
    return x % bound;
  };
  for (std::size_t i = shuffled.size(); i > 1; --i) std::swap(shuffled[i - 1], shuffled[bounded(i)]);
  shuffled.resize(n);
  for (std::size_t i = 0; i < n; ++i) shuffled[i].id = static_cast<int>(i);
  return shuffled;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string file_stem(const std::string& path) { return std::filesystem::path(path).stem().string(); }

}  // namespace wcbs
