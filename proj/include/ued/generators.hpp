#ifndef UED_GENERATORS_HPP
#define UED_GENERATORS_HPP

#include <span>
#include <variant>
#include <vector>

#include "ued/level.hpp"

namespace ued {

enum class MazeLayout { kRandomWalls, kEmptyRoom, kMultiRoom, kPerfectMaze };

std::string_view maze_layout_name(MazeLayout layout);
MazeLayout maze_layout_from_name(std::string_view name);

// Parameters of the level distribution a domain-randomisation teacher draws
// from. Only the fields relevant to `kind` are read.
struct DomainConfig {
  EnvKind kind = EnvKind::kMaze;
  int width = 9;
  int height = 9;
  MazeLayout layout = MazeLayout::kRandomWalls;
  int wall_budget_max = 25;  // wall count ~ U{0..wall_budget_max}
  int min_rooms = 1;         // multi-room mazes
  int max_rooms = 4;

  double apple_prob = 0.7;   // q for FruitChoice
  int fruit_min_rooms = 0;
  int fruit_max_rooms = kMaxRooms;

  double ice_alpha = 1.0;    // Beta prior on the per-level ice rate
  double ice_beta = 15.0;

  void validate() const;
};

inline constexpr int kMaxGenerationRetries = 1000;

Level sample_dr_level(const DomainConfig& domain, Rng& rng);

// Multi-room corridor of `rooms` rooms (1..max_rooms) laid out left to right
// inside a fixed width x height grid; unused rooms are solid wall.
Level generate_multiroom(const DomainConfig& domain, int rooms, Rng& rng);
// Singly connected maze by recursive backtracking (odd dimensions).
Level generate_perfect_maze(int width, int height, Rng& rng);

// Resample the aleatoric ice layer of an icy level from its prior.
void resample_ice(Level& level, double alpha, double beta, Rng& rng);
// Resample the correct fruit of a fruit level from Bernoulli(apple_prob).
void resample_fruit(Level& level, double apple_prob, Rng& rng);

// BFS distance over 4-connected empty cells; 0 when the goal is unreachable.
int shortest_path_length(const Level& level);

namespace edit {
struct AddWall { Pos cell; };
struct RemoveWall { Pos cell; };
struct MoveGoal { Pos cell; };
struct ToggleIce { Pos cell; };
struct FlipFruit {};
struct AddRoom {};
struct RemoveRoom {};
}  // namespace edit

using EditOp = std::variant<edit::AddWall, edit::RemoveWall, edit::MoveGoal,
                            edit::ToggleIce, edit::FlipFruit, edit::AddRoom,
                            edit::RemoveRoom>;

// Applies all edits, then relocates any agent/goal displaced by an added wall
// to a uniformly random empty cell. Throws kInvalidEdit for out-of-range or
// border cells and for edits that do not fit the env kind.
Level apply_edits(const Level& level, std::span<const EditOp> edits, Rng& rng);
Level apply_edit(const Level& level, const EditOp& edit, Rng& rng);

// A random edit valid for the level's kind.
EditOp sample_edit(const Level& level, Rng& rng);

}  // namespace ued

#endif  // UED_GENERATORS_HPP
