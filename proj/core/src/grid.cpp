#include "covplan/grid.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>

namespace covplan {

const char* to_string(CellClass c) {
  switch (c) {
    case CellClass::Unexplored: return "unexplored";
    case CellClass::Obstacle: return "obstacle";
    case CellClass::Goal: return "goal";
    case CellClass::Covered: return "covered";
  }
  return "?";
}

bool knowledge_leq(CellClass a, CellClass b) {
  if (a == b) return true;
  if (a == CellClass::Unexplored) return true;
  return a == CellClass::Goal && b == CellClass::Covered;
}

CellClass knowledge_join(CellClass a, CellClass b, Cell where) {
  if (knowledge_leq(a, b)) return b;
  if (knowledge_leq(b, a)) return a;
  throw ConsistencyError("views disagree about cell " + to_string(where) +
                         ": " + to_string(a) + " vs " + to_string(b));
}

namespace {

bool passable_glyph(char g) { return g == '.' || g == 'G'; }
bool impassable_glyph(char g) { return g == '@' || g == 'O' || g == 'T'; }

}  // namespace

Workspace::Workspace(int width, int height) : width_(width), height_(height) {
  require(width >= 1 && height >= 1, "workspace dimensions must be positive");
  obstacle_.assign(static_cast<std::size_t>(width) * height, 0);
  rebuild_glyphs();
}

Workspace Workspace::parse_map(std::istream& in) {
  auto read_line = [&in](int line_no, std::string& out) {
    if (!std::getline(in, out))
      throw MapParseError(line_no, 0, "unexpected end of file");
    if (!out.empty() && out.back() == '\r') out.pop_back();
  };

  std::string line;
  read_line(1, line);
  if (line.rfind("type ", 0) != 0)
    throw MapParseError(1, 0, "expected 'type <name>'");

  auto read_dim = [&](int line_no, const std::string& key) {
    std::string l;
    read_line(line_no, l);
    std::istringstream ss(l);
    std::string k;
    long v = 0;
    if (!(ss >> k >> v) || k != key || v < 1)
      throw MapParseError(line_no, 0, "expected '" + key + " <positive int>'");
    std::string rest;
    if (ss >> rest)
      throw MapParseError(line_no, 0, "trailing content after " + key);
    return static_cast<int>(v);
  };
  int height = read_dim(2, "height");
  int width = read_dim(3, "width");

  read_line(4, line);
  if (line != "map") throw MapParseError(4, 0, "expected 'map'");

  Workspace ws(width, height);
  ws.glyph_rows_.clear();
  for (int y = 1; y <= height; ++y) {
    int line_no = 4 + y;
    read_line(line_no, line);
    if (static_cast<int>(line.size()) != width)
      throw MapParseError(line_no, 0,
                          "row has " + std::to_string(line.size()) +
                              " glyphs, expected " + std::to_string(width));
    for (int x = 1; x <= width; ++x) {
      char g = line[static_cast<std::size_t>(x - 1)];
      if (impassable_glyph(g))
        ws.obstacle_[ws.index({x, y})] = 1;
      else if (!passable_glyph(g))
        throw MapParseError(line_no, x, std::string("unknown glyph '") + g +
                                            "'");
    }
    ws.glyph_rows_.push_back(line);
  }
  return ws;
}

Workspace Workspace::parse_map_text(const std::string& text) {
  std::istringstream in(text);
  return parse_map(in);
}

Workspace Workspace::load_map_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open map file: " + path);
  return parse_map(in);
}

Workspace Workspace::random(int width, int height, double density,
                            SplitMix64& rng) {
  require(density >= 0.0 && density < 1.0,
          "obstacle density must be in [0, 1)");
  Workspace ws(width, height);
  const int total = width * height;
  const int obstacles = static_cast<int>(std::llround(density * total));

  std::vector<int> cells(static_cast<std::size_t>(total));
  for (int i = 0; i < total; ++i) cells[static_cast<std::size_t>(i)] = i;

  while (true) {
    rng.shuffle(cells);
    std::fill(ws.obstacle_.begin(), ws.obstacle_.end(), 0);
    for (int i = 0; i < obstacles; ++i)
      ws.obstacle_[static_cast<std::size_t>(cells[static_cast<std::size_t>(i)])] = 1;
    if (ws.strongly_connected()) break;
  }
  ws.rebuild_glyphs();
  return ws;
}

int Workspace::free_count() const {
  return static_cast<int>(std::count(obstacle_.begin(), obstacle_.end(), 0));
}

std::vector<Cell> Workspace::free_cells() const {
  std::vector<Cell> out;
  out.reserve(static_cast<std::size_t>(free_count()));
  for (int y = 1; y <= height_; ++y)
    for (int x = 1; x <= width_; ++x)
      if (!obstacle_[index({x, y})]) out.push_back({x, y});
  return out;
}

bool Workspace::strongly_connected() const {
  std::vector<Cell> free = free_cells();
  if (free.empty()) return true;

  std::vector<char> seen(obstacle_.size(), 0);
  std::vector<Cell> stack{free.front()};
  seen[static_cast<std::size_t>(index(free.front()))] = 1;
  std::size_t reached = 1;
  while (!stack.empty()) {
    Cell c = stack.back();
    stack.pop_back();
    const Cell neighbors[4] = {{c.x + 1, c.y},
                               {c.x, c.y + 1},
                               {c.x - 1, c.y},
                               {c.x, c.y - 1}};
    for (Cell n : neighbors) {
      if (!in_bounds(n) || obstacle_[index(n)]) continue;
      char& s = seen[static_cast<std::size_t>(index(n))];
      if (s) continue;
      s = 1;
      ++reached;
      stack.push_back(n);
    }
  }
  return reached == free.size();
}

std::string Workspace::serialize() const {
  std::string out = "type octile\nheight " + std::to_string(height_) +
                    "\nwidth " + std::to_string(width_) + "\nmap\n";
  for (const std::string& row : glyph_rows_) {
    out += row;
    out += '\n';
  }
  return out;
}

void Workspace::set_obstacle(Cell c, bool v) {
  obstacle_[index(c)] = v ? 1 : 0;
}

void Workspace::rebuild_glyphs() {
  glyph_rows_.assign(static_cast<std::size_t>(height_),
                     std::string(static_cast<std::size_t>(width_), '.'));
  for (int y = 1; y <= height_; ++y)
    for (int x = 1; x <= width_; ++x)
      if (obstacle_[index({x, y})])
        glyph_rows_[static_cast<std::size_t>(y - 1)]
                   [static_cast<std::size_t>(x - 1)] = '@';
}

int GridView::count(CellClass v) const {
  return static_cast<int>(std::count(cells_.begin(), cells_.end(), v));
}

std::vector<Cell> GridView::goal_cells() const {
  std::vector<Cell> out;
  for (int y = 1; y <= height_; ++y)
    for (int x = 1; x <= width_; ++x)
      if (at({x, y}) == CellClass::Goal) out.push_back({x, y});
  return out;
}

std::vector<Cell> GridView::covered_cells() const {
  std::vector<Cell> out;
  for (int y = 1; y <= height_; ++y)
    for (int x = 1; x <= width_; ++x)
      if (at({x, y}) == CellClass::Covered) out.push_back({x, y});
  return out;
}

GridView init_local_view(const Workspace& truth, Cell start) {
  if (!truth.in_bounds(start))
    throw ConfigError("deployment cell " + to_string(start) +
                      " is out of bounds");
  if (truth.obstacle(start))
    throw ConfigError("deployment cell " + to_string(start) +
                      " is an obstacle");
  GridView view(truth.width(), truth.height());
  sense_and_update(view, truth, start);
  return view;
}

void sense_and_update(GridView& view, const Workspace& truth, Cell at) {
  require(truth.in_bounds(at) && truth.free_cell(at),
          "sensing from a non-free cell");
  view.set(at, knowledge_join(view.at(at), CellClass::Covered, at));
  const Cell neighbors[4] = {{at.x + 1, at.y},
                             {at.x, at.y + 1},
                             {at.x - 1, at.y},
                             {at.x, at.y - 1}};
  for (Cell n : neighbors) {
    if (!truth.in_bounds(n)) continue;
    CellClass sensed =
        truth.obstacle(n) ? CellClass::Obstacle : CellClass::Goal;
    view.set(n, knowledge_join(view.at(n), sensed, n));
  }
}

void fuse_views(GridView& global, const GridView& local) {
  if (global.width() != local.width() || global.height() != local.height())
    throw ConsistencyError("cannot fuse views of different dimensions");
  for (int y = 1; y <= global.height(); ++y)
    for (int x = 1; x <= global.width(); ++x) {
      Cell c{x, y};
      global.set(c, knowledge_join(global.at(c), local.at(c), c));
    }
}

std::vector<Cell> unassigned_goals(const GridView& view,
                                   const std::vector<Cell>& reserved) {
  std::vector<Cell> out;
  for (Cell g : view.goal_cells())
    if (!std::binary_search(reserved.begin(), reserved.end(), g))
      out.push_back(g);
  return out;
}

}  // namespace covplan
