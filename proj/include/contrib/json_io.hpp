#pragma once

#include <string>

#include <json.hpp>

#include "contrib/game.hpp"

namespace contrib {

using json = nlohmann::json;

json scalar_to_json(const ScalarFn& f);
ScalarFn scalar_from_json(const json& j, const std::string& where);

json reward_to_json(const RewardSpec& r);
RewardSpec reward_from_json(const json& j, const std::string& where);

json game_to_json(const Game& g);
Game game_from_json(const json& j);
std::string save_game(const Game& g);
Game load_game(const std::string& text);

json profile_to_json(const Game& g, const Profile& s);
Profile profile_from_json(const Game& g, const json& j);
std::string save_profile(const Game& g, const Profile& s);
Profile load_profile(const Game& g, const std::string& text);

Game load_game_file(const std::string& path);
Profile load_profile_file(const Game& g, const std::string& path);
std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

}  // namespace contrib
