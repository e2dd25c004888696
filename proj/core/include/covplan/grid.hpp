// Grid workspace: ground truth, per-robot knowledge views, sensing and
// view fusion, and map file I/O.
//
// The workspace is a width x height grid of cells, 1-based, row 1 at the
// top. Free cells are either uncovered ("goal") or already covered; what a
// robot knows about a cell only ever grows:
//
//   Unexplored  <  Obstacle
//   Unexplored  <  Goal  <  Covered
//
// Obstacle is incomparable with Goal/Covered; fusing such a pair means two
// exact sensors disagreed about ground truth and raises ConsistencyError.
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "covplan/errors.hpp"
#include "covplan/rng.hpp"
#include "covplan/types.hpp"

namespace covplan {

enum class CellClass : unsigned char {
  Unexplored = 0,
  Obstacle = 1,
  Goal = 2,     // known free, not yet covered
  Covered = 3,  // known free, covered by some robot
};

const char* to_string(CellClass c);

// True when knowledge `a` can grow into knowledge `b`.
bool knowledge_leq(CellClass a, CellClass b);

// Least upper bound of two observations of the same cell.
// Throws ConsistencyError when the observations contradict each other.
CellClass knowledge_join(CellClass a, CellClass b, Cell where);

// Ground truth of the workspace: dimensions plus the obstacle set. Keeps
// the verbatim glyph rows of the source file so serialize() round-trips
// byte-exactly even for maps using the alternative glyphs (G, O, T).
class Workspace {
 public:
  Workspace(int width, int height);  // all free

  static Workspace parse_map(std::istream& in);
  static Workspace parse_map_text(const std::string& text);
  static Workspace load_map_file(const std::string& path);

  // Random workspace with exactly round(density * width * height) obstacle
  // cells and strongly connected free space. Re-draws obstacle sets from
  // the seeded stream until connectivity holds, so the result is a pure
  // function of (width, height, density, rng state).
  static Workspace random(int width, int height, double density,
                          SplitMix64& rng);

  int width() const { return width_; }
  int height() const { return height_; }
  int size() const { return width_ * height_; }

  bool in_bounds(Cell c) const {
    return c.x >= 1 && c.x <= width_ && c.y >= 1 && c.y <= height_;
  }
  bool obstacle(Cell c) const { return obstacle_[index(c)]; }
  bool free_cell(Cell c) const { return !obstacle_[index(c)]; }

  int free_count() const;
  std::vector<Cell> free_cells() const;  // row-major (y, then x)

  // True when the free cells form one 4-connected component (or there are
  // no free cells at all).
  bool strongly_connected() const;

  // Map file text: "type octile / height / width / map" header plus the
  // glyph rows.
  std::string serialize() const;

  int index(Cell c) const { return (c.y - 1) * width_ + (c.x - 1); }

 private:
  void set_obstacle(Cell c, bool v);
  void rebuild_glyphs();

  int width_;
  int height_;
  std::vector<char> obstacle_;
  std::vector<std::string> glyph_rows_;
};

// What one party (a robot, or the coordinator after fusion) currently
// knows about every cell.
class GridView {
 public:
  GridView() : width_(0), height_(0) {}
  GridView(int width, int height)
      : width_(width),
        height_(height),
        cells_(static_cast<std::size_t>(width) * height,
               CellClass::Unexplored) {}

  int width() const { return width_; }
  int height() const { return height_; }
  bool empty() const { return cells_.empty(); }

  bool in_bounds(Cell c) const {
    return c.x >= 1 && c.x <= width_ && c.y >= 1 && c.y <= height_;
  }
  CellClass at(Cell c) const { return cells_[index(c)]; }
  void set(Cell c, CellClass v) { cells_[index(c)] = v; }

  int count(CellClass v) const;

  // Known-uncovered free cells in row-major order (y, then x). This scan
  // order defines goal ids for the assignment stage.
  std::vector<Cell> goal_cells() const;
  std::vector<Cell> covered_cells() const;

  bool traversable(Cell c) const {
    CellClass v = at(c);
    return v == CellClass::Goal || v == CellClass::Covered;
  }

  friend bool operator==(const GridView&, const GridView&) = default;

  int index(Cell c) const { return (c.y - 1) * width_ + (c.x - 1); }

 private:
  int width_;
  int height_;
  std::vector<CellClass> cells_;
};

// Fresh local view of a robot deployed at `start`: everything unexplored
// except the start cell (covered) and its sensed 4-neighborhood.
// Throws ConfigError when the start cell is an obstacle.
GridView init_local_view(const Workspace& truth, Cell start);

// One sensing action at `at`: the cell itself becomes covered and the
// exact range-1 rangefinders classify the four in-bounds neighbors.
// Knowledge only grows; re-sensing a known cell is a no-op.
void sense_and_update(GridView& view, const Workspace& truth, Cell at);

// Merge `local` into `global` cell-wise with knowledge_join.
void fuse_views(GridView& global, const GridView& local);

// Known goals not reserved by robots still travelling toward them.
// `reserved` must be sorted; the result preserves goal scan order.
std::vector<Cell> unassigned_goals(const GridView& view,
                                   const std::vector<Cell>& reserved);

}  // namespace covplan
