#include "ued/generators.hpp"

#include <algorithm>
#include <deque>

namespace ued {

std::string_view maze_layout_name(MazeLayout layout) {
  switch (layout) {
    case MazeLayout::kRandomWalls: return "random_walls";
    case MazeLayout::kEmptyRoom: return "empty_room";
    case MazeLayout::kMultiRoom: return "multi_room";
    case MazeLayout::kPerfectMaze: return "perfect_maze";
  }
  return "random_walls";
}

MazeLayout maze_layout_from_name(std::string_view name) {
  if (name == "random_walls") return MazeLayout::kRandomWalls;
  if (name == "empty_room") return MazeLayout::kEmptyRoom;
  if (name == "multi_room") return MazeLayout::kMultiRoom;
  if (name == "perfect_maze") return MazeLayout::kPerfectMaze;
  throw UedError(ErrorCode::kConfigInvalid, "unknown maze layout '" + std::string(name) + "'");
}

void DomainConfig::validate() const {
  auto fail = [](const std::string& what) {
    throw UedError(ErrorCode::kConfigInvalid, "domain." + what);
  };
  if (kind == EnvKind::kFruitChoice) {
    if (!(apple_prob >= 0.0 && apple_prob <= 1.0)) fail("apple_prob must be in [0,1]");
    if (fruit_min_rooms < 0 || fruit_max_rooms > kMaxRooms || fruit_min_rooms > fruit_max_rooms) {
      fail("fruit room range must satisfy 0 <= min <= max <= 8");
    }
    return;
  }
  if (width < 3 || height < 3) fail("width/height must be >= 3");
  const int interior = (width - 2) * (height - 2);
  if (wall_budget_max < 0 || wall_budget_max > interior - 2) {
    fail("wall_budget_max must be in [0, interior cells - 2]");
  }
  if (layout == MazeLayout::kMultiRoom) {
    if (min_rooms < 1 || min_rooms > max_rooms) fail("room range invalid");
    if ((width - 1) % max_rooms != 0 || (width - 1) / max_rooms < 3 || height < 4) {
      fail("multi_room needs width = max_rooms * r + 1 with r >= 3");
    }
  }
  if (layout == MazeLayout::kPerfectMaze && (width % 2 == 0 || height % 2 == 0)) {
    fail("perfect_maze needs odd width/height");
  }
  if (kind == EnvKind::kIcyMaze && !(ice_alpha > 0.0 && ice_beta > 0.0)) {
    fail("ice prior parameters must be positive");
  }
}

namespace {

std::vector<Pos> empty_cells(const Level& level) {
  std::vector<Pos> out;
  for (int y = 1; y < level.height - 1; ++y) {
    for (int x = 1; x < level.width - 1; ++x) {
      if (level.cell({x, y}) == Cell::kEmpty) out.push_back({x, y});
    }
  }
  return out;
}

Pos random_interior_cell(const Level& level, Rng& rng) {
  return {uniform_int(rng, 1, level.width - 2), uniform_int(rng, 1, level.height - 2)};
}

// Uniform cell among empty interior cells other than `exclude`.
Pos random_empty_cell(const Level& level, Rng& rng, std::span<const Pos> exclude) {
  std::vector<Pos> cells = empty_cells(level);
  std::erase_if(cells, [&](Pos p) {
    return std::find(exclude.begin(), exclude.end(), p) != exclude.end();
  });
  if (cells.empty()) {
    throw UedError(ErrorCode::kGenerationFailed, "no empty cell available");
  }
  return cells[uniform_index(rng, cells.size())];
}

Level random_walls_maze(const DomainConfig& domain, Rng& rng) {
  Level level = make_empty_maze(domain.width, domain.height, {1, 1}, kEast, {2, 1});
  const int walls = uniform_int(rng, 0, domain.wall_budget_max);
  std::vector<Pos> interior;
  for (int y = 1; y < level.height - 1; ++y) {
    for (int x = 1; x < level.width - 1; ++x) interior.push_back({x, y});
  }
  // Partial Fisher-Yates picks `walls` distinct cells.
  for (int i = 0; i < walls; ++i) {
    const std::size_t j = i + uniform_index(rng, interior.size() - static_cast<std::size_t>(i));
    std::swap(interior[static_cast<std::size_t>(i)], interior[j]);
    level.cells[level.index(interior[static_cast<std::size_t>(i)])] = Cell::kWall;
  }
  // Agent and goal at uniform distinct empty cells; collisions resample.
  for (int attempt = 0; attempt < kMaxGenerationRetries; ++attempt) {
    const Pos goal = random_interior_cell(level, rng);
    const Pos agent = random_interior_cell(level, rng);
    if (level.cell(goal) == Cell::kWall || level.cell(agent) == Cell::kWall || goal == agent) {
      continue;
    }
    level.goal = goal;
    level.agent = agent;
    level.facing = uniform_int(rng, 0, 3);
    return level;
  }
  throw UedError(ErrorCode::kGenerationFailed, "could not place agent and goal");
}

}  // namespace

Level generate_multiroom(const DomainConfig& domain, int rooms, Rng& rng) {
  const int span = (domain.width - 1) / domain.max_rooms;  // room width + wall
  Level level = make_empty_maze(domain.width, domain.height, {1, 1}, kEast, {2, 1});
  // Solid fill, then carve the used rooms.
  for (auto& c : level.cells) c = Cell::kWall;
  for (int r = 0; r < rooms; ++r) {
    for (int y = 1; y < domain.height - 1; ++y) {
      for (int x = r * span + 1; x < (r + 1) * span; ++x) {
        level.cells[level.index({x, y})] = Cell::kEmpty;
      }
    }
    if (r + 1 < rooms) {
      const int door_y = uniform_int(rng, 1, domain.height - 2);
      level.cells[level.index({(r + 1) * span, door_y})] = Cell::kEmpty;
    }
  }
  auto room_cell = [&](int r) {
    return Pos{uniform_int(rng, r * span + 1, (r + 1) * span - 1),
               uniform_int(rng, 1, domain.height - 2)};
  };
  level.agent = room_cell(0);
  do {
    level.goal = room_cell(rooms - 1);
  } while (level.goal == level.agent);
  level.facing = uniform_int(rng, 0, 3);
  return level;
}

Level generate_perfect_maze(int width, int height, Rng& rng) {
  Level level = make_empty_maze(width, height, {1, 1}, kEast, {1, 1});
  for (auto& c : level.cells) c = Cell::kWall;
  std::vector<Pos> stack{{1, 1}};
  level.cells[level.index({1, 1})] = Cell::kEmpty;
  const Pos dirs[4] = {{2, 0}, {0, 2}, {-2, 0}, {0, -2}};
  while (!stack.empty()) {
    const Pos cur = stack.back();
    std::vector<Pos> options;
    for (const Pos d : dirs) {
      const Pos n{cur.x + d.x, cur.y + d.y};
      if (n.x > 0 && n.y > 0 && n.x < width - 1 && n.y < height - 1 &&
          level.cell(n) == Cell::kWall) {
        options.push_back(n);
      }
    }
    if (options.empty()) {
      stack.pop_back();
      continue;
    }
    const Pos next = options[uniform_index(rng, options.size())];
    level.cells[level.index({(cur.x + next.x) / 2, (cur.y + next.y) / 2})] = Cell::kEmpty;
    level.cells[level.index(next)] = Cell::kEmpty;
    stack.push_back(next);
  }
  std::vector<Pos> rooms;
  for (int y = 1; y < height - 1; y += 2) {
    for (int x = 1; x < width - 1; x += 2) rooms.push_back({x, y});
  }
  level.agent = rooms[uniform_index(rng, rooms.size())];
  do {
    level.goal = rooms[uniform_index(rng, rooms.size())];
  } while (level.goal == level.agent);
  level.facing = uniform_int(rng, 0, 3);
  return level;
}

void resample_ice(Level& level, double alpha, double beta, Rng& rng) {
  level.ice_rate_q = sample_beta(rng, alpha, beta);
  level.ice.assign(level.cells.size(), 0);
  for (std::size_t i = 0; i < level.cells.size(); ++i) {
    if (level.cells[i] == Cell::kEmpty && bernoulli(rng, level.ice_rate_q)) level.ice[i] = 1;
  }
}

void resample_fruit(Level& level, double apple_prob, Rng& rng) {
  level.correct_fruit = bernoulli(rng, apple_prob) ? Fruit::kApple : Fruit::kBanana;
}

Level sample_dr_level(const DomainConfig& domain, Rng& rng) {
  for (int attempt = 0; attempt < kMaxGenerationRetries; ++attempt) {
    Level level;
    if (domain.kind == EnvKind::kFruitChoice) {
      level.kind = EnvKind::kFruitChoice;
      level.room_count = uniform_int(rng, domain.fruit_min_rooms, domain.fruit_max_rooms);
      resample_fruit(level, domain.apple_prob, rng);
      for (int i = 0; i < level.room_count; ++i) {
        level.door_kick_counts.push_back(uniform_int(rng, 1, 3));
      }
    } else {
      switch (domain.layout) {
        case MazeLayout::kRandomWalls: level = random_walls_maze(domain, rng); break;
        case MazeLayout::kEmptyRoom: {
          DomainConfig empty = domain;
          empty.wall_budget_max = 0;
          level = random_walls_maze(empty, rng);
          break;
        }
        case MazeLayout::kMultiRoom:
          level = generate_multiroom(domain, uniform_int(rng, domain.min_rooms, domain.max_rooms), rng);
          break;
        case MazeLayout::kPerfectMaze:
          level = generate_perfect_maze(domain.width, domain.height, rng);
          break;
      }
      if (domain.kind == EnvKind::kIcyMaze) {
        level.kind = EnvKind::kIcyMaze;
        resample_ice(level, domain.ice_alpha, domain.ice_beta, rng);
      }
    }
    level.seed = rng();
    try {
      validate_level(level);
      return level;
    } catch (const UedError&) {
      continue;
    }
  }
  throw UedError(ErrorCode::kGenerationFailed, "level invariants unmet after 1000 retries");
}

int shortest_path_length(const Level& level) {
  if (!level.is_grid()) return 0;
  std::vector<int> dist(level.cells.size(), -1);
  std::deque<Pos> queue{level.agent};
  dist[level.index(level.agent)] = 0;
  while (!queue.empty()) {
    const Pos cur = queue.front();
    queue.pop_front();
    if (cur == level.goal) return dist[level.index(cur)];
    for (int f = 0; f < 4; ++f) {
      const Pos d = facing_delta(f);
      const Pos n{cur.x + d.x, cur.y + d.y};
      if (level.is_wall(n) || dist[level.index(n)] >= 0) continue;
      dist[level.index(n)] = dist[level.index(cur)] + 1;
      queue.push_back(n);
    }
  }
  return 0;
}

namespace {

void check_cell(const Level& level, Pos p) {
  if (!level.is_grid()) {
    throw UedError(ErrorCode::kInvalidEdit, "cell edit on a non-grid level");
  }
  if (!level.in_bounds(p) || level.is_border(p)) {
    throw UedError(ErrorCode::kInvalidEdit, "edit cell out of bounds or on the border");
  }
}

}  // namespace

Level apply_edits(const Level& input, std::span<const EditOp> edits, Rng& rng) {
  Level level = input;
  bool agent_displaced = false;
  bool goal_displaced = false;
  for (const EditOp& op : edits) {
    std::visit(
        [&](const auto& e) {
          using T = std::decay_t<decltype(e)>;
          if constexpr (std::is_same_v<T, edit::AddWall>) {
            check_cell(level, e.cell);
            level.cells[level.index(e.cell)] = Cell::kWall;
            if (level.kind == EnvKind::kIcyMaze) level.ice[level.index(e.cell)] = 0;
            if (e.cell == level.agent) agent_displaced = true;
            if (e.cell == level.goal) goal_displaced = true;
          } else if constexpr (std::is_same_v<T, edit::RemoveWall>) {
            check_cell(level, e.cell);
            level.cells[level.index(e.cell)] = Cell::kEmpty;
          } else if constexpr (std::is_same_v<T, edit::MoveGoal>) {
            check_cell(level, e.cell);
            // Occupied targets make the move a no-op.
            if (level.cell(e.cell) == Cell::kEmpty && e.cell != level.agent) {
              level.goal = e.cell;
              goal_displaced = false;
            }
          } else if constexpr (std::is_same_v<T, edit::ToggleIce>) {
            check_cell(level, e.cell);
            if (level.kind != EnvKind::kIcyMaze) {
              throw UedError(ErrorCode::kInvalidEdit, "ToggleIce requires icy_maze");
            }
            if (level.cell(e.cell) == Cell::kEmpty) {
              level.ice[level.index(e.cell)] ^= 1;
            }
          } else {
            if (level.kind != EnvKind::kFruitChoice) {
              throw UedError(ErrorCode::kInvalidEdit, "fruit edit on a grid level");
            }
            if constexpr (std::is_same_v<T, edit::FlipFruit>) {
              level.correct_fruit =
                  level.correct_fruit == Fruit::kApple ? Fruit::kBanana : Fruit::kApple;
            } else if constexpr (std::is_same_v<T, edit::AddRoom>) {
              if (level.room_count < kMaxRooms) {
                level.room_count += 1;
                level.door_kick_counts.push_back(uniform_int(rng, 1, 3));
              }
            } else if constexpr (std::is_same_v<T, edit::RemoveRoom>) {
              if (level.room_count > 0) {
                level.room_count -= 1;
                level.door_kick_counts.pop_back();
              }
            }
          }
        },
        op);
  }
  if (goal_displaced) {
    const Pos exclude[] = {level.agent};
    level.goal = random_empty_cell(level, rng, exclude);
  }
  if (agent_displaced) {
    const Pos exclude[] = {level.goal};
    level.agent = random_empty_cell(level, rng, exclude);
  }
  validate_level(level);
  return level;
}

Level apply_edit(const Level& level, const EditOp& op, Rng& rng) {
  return apply_edits(level, std::span<const EditOp>(&op, 1), rng);
}

EditOp sample_edit(const Level& level, Rng& rng) {
  if (level.kind == EnvKind::kFruitChoice) {
    switch (uniform_int(rng, 0, 2)) {
      case 0: return edit::FlipFruit{};
      case 1: return edit::AddRoom{};
      default: return edit::RemoveRoom{};
    }
  }
  const Pos cell = random_interior_cell(level, rng);
  const double u = uniform01(rng);
  if (level.kind == EnvKind::kIcyMaze && u < 0.2) return edit::ToggleIce{cell};
  if (u < 0.95) {
    return bernoulli(rng, 0.5) ? EditOp{edit::AddWall{cell}} : EditOp{edit::RemoveWall{cell}};
  }
  return edit::MoveGoal{cell};
}

}  // namespace ued
