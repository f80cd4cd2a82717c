#ifndef UED_LEVEL_HPP
#define UED_LEVEL_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "ued/common.hpp"

namespace ued {

enum class EnvKind { kMaze, kFruitChoice, kIcyMaze };
enum class Cell : std::uint8_t { kEmpty = 0, kWall = 1 };
enum class Fruit { kApple, kBanana };

// Facing directions follow the MiniGrid convention.
enum Facing : int { kEast = 0, kSouth = 1, kWest = 2, kNorth = 3 };

inline constexpr int kMaxRooms = 8;

std::string_view env_kind_name(EnvKind kind);
EnvKind env_kind_from_name(std::string_view name);
std::string_view fruit_name(Fruit fruit);

Pos facing_delta(int facing);

// One concrete setting of the environment's free parameters. The payload
// fields that do not apply to `kind` are left empty.
struct Level {
  EnvKind kind = EnvKind::kMaze;

  // Maze / IcyMaze.
  int width = 0;
  int height = 0;
  std::vector<Cell> cells;  // row-major, index y * width + x
  Pos agent;
  int facing = kEast;
  Pos goal;

  // IcyMaze: one flag per cell; walls always 0.
  std::vector<std::uint8_t> ice;
  double ice_rate_q = 0.0;

  // FruitChoice.
  int room_count = 0;
  Fruit correct_fruit = Fruit::kApple;
  std::vector<int> door_kick_counts;

  std::uint64_t seed = 0;

  bool is_grid() const { return kind != EnvKind::kFruitChoice; }
  bool in_bounds(Pos p) const {
    return p.x >= 0 && p.y >= 0 && p.x < width && p.y < height;
  }
  bool is_border(Pos p) const {
    return p.x == 0 || p.y == 0 || p.x == width - 1 || p.y == height - 1;
  }
  std::size_t index(Pos p) const {
    return static_cast<std::size_t>(p.y) * static_cast<std::size_t>(width) +
           static_cast<std::size_t>(p.x);
  }
  Cell cell(Pos p) const { return cells[index(p)]; }
  bool is_wall(Pos p) const { return !in_bounds(p) || cell(p) == Cell::kWall; }
  bool is_icy(Pos p) const {
    return kind == EnvKind::kIcyMaze && in_bounds(p) && ice[index(p)] != 0;
  }

  // Walls strictly inside the border ("blocks").
  int interior_wall_count() const;
  int ice_count() const;

  bool operator==(const Level&) const = default;
};

Level make_empty_maze(int width, int height, Pos agent, int facing, Pos goal);

// Throws UedError(kInvalidLevel) when an invariant fails.
void validate_level(const Level& level);

// Canonical JSON: keys sorted, no whitespace. Round-trips bit-exactly.
std::string level_to_json(const Level& level);
Level level_from_json(std::string_view text);

// Grid as text rows ('#' wall, '.' empty, 'A' agent, 'G' goal); for fixtures
// and debugging.
Level maze_from_rows(const std::vector<std::string>& rows, int facing = kEast);
std::string maze_to_rows(const Level& level);

}  // namespace ued

#endif  // UED_LEVEL_HPP
