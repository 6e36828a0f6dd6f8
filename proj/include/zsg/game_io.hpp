#pragma once

#include <string>

#include "zsg/game.hpp"

namespace zsg {

// Plain-text game format, lossless at 17 significant digits:
//
//   zsg-game v1
//   states S
//   actions1 A1
//   actions2 A2
//   discount g
//   reward1
//   ... S*A1 lines of A2 numbers, states outermost ...
//   transition
//   ... S*A1*A2 lines of S numbers, (s, a1, a2) lexicographic ...
//   end
//
// Writing then re-reading then re-writing reproduces the file byte for byte.
void save_game(const StochasticGame& game, const std::string& path);
StochasticGame load_game(const std::string& path);

// Same shape for policies: "zsg-policy v1" header, pi1 then pi2 blocks.
void save_policy(const JointPolicy& policy, const std::string& path);
JointPolicy load_policy(const std::string& path);

// And for feature maps: "zsg-features v1" header with per-player dimensions,
// phi1 then phi2 blocks, one row per line.
void save_features(const FeatureMap& features, const std::string& path);
FeatureMap load_features(const std::string& path);

} // namespace zsg
