#include "ued/level.hpp"

#include <algorithm>
#include <cmath>
#include <json.hpp>

namespace ued {

using nlohmann::json;

std::string_view env_kind_name(EnvKind kind) {
  switch (kind) {
    case EnvKind::kMaze: return "maze";
    case EnvKind::kFruitChoice: return "fruit_choice";
    case EnvKind::kIcyMaze: return "icy_maze";
  }
  return "maze";
}

EnvKind env_kind_from_name(std::string_view name) {
  if (name == "maze") return EnvKind::kMaze;
  if (name == "fruit_choice") return EnvKind::kFruitChoice;
  if (name == "icy_maze") return EnvKind::kIcyMaze;
  throw UedError(ErrorCode::kInvalidLevel,
                 "unknown env_kind '" + std::string(name) + "'");
}

std::string_view fruit_name(Fruit fruit) {
  return fruit == Fruit::kApple ? "apple" : "banana";
}

Pos facing_delta(int facing) {
  switch (facing) {
    case kEast: return {1, 0};
    case kSouth: return {0, 1};
    case kWest: return {-1, 0};
    default: return {0, -1};
  }
}

int Level::interior_wall_count() const {
  int count = 0;
  for (int y = 1; y < height - 1; ++y) {
    for (int x = 1; x < width - 1; ++x) {
      if (cells[index({x, y})] == Cell::kWall) ++count;
    }
  }
  return count;
}

int Level::ice_count() const {
  return static_cast<int>(std::count(ice.begin(), ice.end(), std::uint8_t{1}));
}

Level make_empty_maze(int width, int height, Pos agent, int facing, Pos goal) {
  Level level;
  level.kind = EnvKind::kMaze;
  level.width = width;
  level.height = height;
  level.cells.assign(static_cast<std::size_t>(width * height), Cell::kEmpty);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      if (level.is_border({x, y})) level.cells[level.index({x, y})] = Cell::kWall;
    }
  }
  level.agent = agent;
  level.facing = facing;
  level.goal = goal;
  return level;
}

namespace {

[[noreturn]] void invalid(const std::string& what) {
  throw UedError(ErrorCode::kInvalidLevel, what);
}

}  // namespace

void validate_level(const Level& level) {
  if (level.kind == EnvKind::kFruitChoice) {
    if (level.room_count < 0 || level.room_count > kMaxRooms) {
      invalid("room_count must be in [0, 8]");
    }
    if (static_cast<int>(level.door_kick_counts.size()) != level.room_count) {
      invalid("door_kick_counts length must equal room_count");
    }
    for (int k : level.door_kick_counts) {
      if (k < 0) invalid("door kick counts must be nonnegative");
    }
    return;
  }
  if (level.width < 3 || level.height < 3) invalid("grid must be at least 3x3");
  if (level.cells.size() != static_cast<std::size_t>(level.width * level.height)) {
    invalid("cell count does not match width*height");
  }
  for (int y = 0; y < level.height; ++y) {
    for (int x = 0; x < level.width; ++x) {
      if (level.is_border({x, y}) && level.cell({x, y}) != Cell::kWall) {
        invalid("border cells must be walls");
      }
    }
  }
  if (!level.in_bounds(level.agent) || !level.in_bounds(level.goal)) {
    invalid("agent/goal out of bounds");
  }
  if (level.agent == level.goal) invalid("agent_start overlaps goal");
  if (level.cell(level.agent) != Cell::kEmpty) invalid("agent_start is a wall");
  if (level.cell(level.goal) != Cell::kEmpty) invalid("goal is a wall");
  if (level.facing < 0 || level.facing > 3) invalid("facing must be in [0, 3]");
  if (level.kind == EnvKind::kIcyMaze) {
    if (level.ice.size() != level.cells.size()) {
      invalid("ice_mask must cover every cell");
    }
    for (std::size_t i = 0; i < level.ice.size(); ++i) {
      if (level.ice[i] > 1) invalid("ice flags must be 0/1");
      if (level.ice[i] != 0 && level.cells[i] == Cell::kWall) {
        invalid("wall cells cannot be icy");
      }
    }
    if (!(level.ice_rate_q >= 0.0 && level.ice_rate_q <= 1.0)) {
      invalid("ice_rate_q must be a probability");
    }
  } else if (!level.ice.empty()) {
    invalid("ice_mask only valid for icy_maze");
  }
}

std::string level_to_json(const Level& level) {
  json j;
  j["env_kind"] = env_kind_name(level.kind);
  j["seed"] = level.seed;
  if (level.is_grid()) {
    j["width"] = level.width;
    j["height"] = level.height;
    std::string cells;
    cells.reserve(level.cells.size());
    for (Cell c : level.cells) cells.push_back(c == Cell::kWall ? '#' : '.');
    j["cells"] = cells;
    j["agent"] = {level.agent.x, level.agent.y};
    j["facing"] = level.facing;
    j["goal"] = {level.goal.x, level.goal.y};
  } else {
    j["width"] = 0;
    j["height"] = 0;
    j["cells"] = "";
    j["agent"] = nullptr;
    j["facing"] = 0;
    j["goal"] = nullptr;
  }
  json extras = json::object();
  if (level.kind == EnvKind::kIcyMaze) {
    std::string ice;
    ice.reserve(level.ice.size());
    for (auto v : level.ice) ice.push_back(v ? '1' : '0');
    extras["ice"] = ice;
    extras["ice_rate_q"] = level.ice_rate_q;
  } else if (level.kind == EnvKind::kFruitChoice) {
    extras["room_count"] = level.room_count;
    extras["correct_fruit"] = fruit_name(level.correct_fruit);
    extras["door_kick_counts"] = level.door_kick_counts;
  }
  j["extras"] = extras;
  return j.dump();
}

Level level_from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    invalid(std::string("malformed level JSON: ") + e.what());
  }
  Level level;
  try {
    level.kind = env_kind_from_name(j.at("env_kind").get<std::string>());
    level.seed = j.at("seed").get<std::uint64_t>();
    const json& extras = j.at("extras");
    if (level.is_grid()) {
      level.width = j.at("width").get<int>();
      level.height = j.at("height").get<int>();
      const auto cells = j.at("cells").get<std::string>();
      level.cells.reserve(cells.size());
      for (char c : cells) {
        if (c != '#' && c != '.') invalid("cells must contain only '#' or '.'");
        level.cells.push_back(c == '#' ? Cell::kWall : Cell::kEmpty);
      }
      level.agent = {j.at("agent").at(0).get<int>(), j.at("agent").at(1).get<int>()};
      level.facing = j.at("facing").get<int>();
      level.goal = {j.at("goal").at(0).get<int>(), j.at("goal").at(1).get<int>()};
      if (level.kind == EnvKind::kIcyMaze) {
        const auto ice = extras.at("ice").get<std::string>();
        for (char c : ice) {
          if (c != '0' && c != '1') invalid("ice must contain only '0' or '1'");
          level.ice.push_back(c == '1' ? 1 : 0);
        }
        level.ice_rate_q = extras.at("ice_rate_q").get<double>();
      }
    } else {
      level.room_count = extras.at("room_count").get<int>();
      const auto fruit = extras.at("correct_fruit").get<std::string>();
      if (fruit != "apple" && fruit != "banana") invalid("unknown fruit '" + fruit + "'");
      level.correct_fruit = fruit == "apple" ? Fruit::kApple : Fruit::kBanana;
      level.door_kick_counts = extras.at("door_kick_counts").get<std::vector<int>>();
    }
  } catch (const json::exception& e) {
    invalid(std::string("level JSON missing/invalid field: ") + e.what());
  }
  validate_level(level);
  return level;
}

Level maze_from_rows(const std::vector<std::string>& rows, int facing) {
  Level level;
  level.kind = EnvKind::kMaze;
  level.height = static_cast<int>(rows.size());
  level.width = rows.empty() ? 0 : static_cast<int>(rows.front().size());
  level.facing = facing;
  for (int y = 0; y < level.height; ++y) {
    if (static_cast<int>(rows[y].size()) != level.width) invalid("ragged rows");
    for (int x = 0; x < level.width; ++x) {
      const char c = rows[y][x];
      level.cells.push_back(c == '#' ? Cell::kWall : Cell::kEmpty);
      if (c == 'A') level.agent = {x, y};
      if (c == 'G') level.goal = {x, y};
    }
  }
  validate_level(level);
  return level;
}

std::string maze_to_rows(const Level& level) {
  std::string out;
  for (int y = 0; y < level.height; ++y) {
    for (int x = 0; x < level.width; ++x) {
      const Pos p{x, y};
      if (p == level.agent) out.push_back('A');
      else if (p == level.goal) out.push_back('G');
      else if (level.cell(p) == Cell::kWall) out.push_back('#');
      else if (level.is_icy(p)) out.push_back('~');
      else out.push_back('.');
    }
    out.push_back('\n');
  }
  return out;
}

}  // namespace ued
