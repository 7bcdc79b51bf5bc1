// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "sien/congruity/network.hpp"
#include "sien/congruity/objective.hpp"

namespace sien::congruity {

struct Model {
  ParameterSet theta;
  Hyperparams hyper;
  bool operator==(const Model& o) const;
};

// Header (widths, d_max, hyperparameters, seed) then one line per neuron:
//   w <layer> <index> <alive> <bias> <c_1> ... <c_d>
// Doubles use the shortest round-trip form, so read(write(m)) == m exactly.
void write_model(std::ostream& out, const Model& m);
std::string format_model(const Model& m);
Model read_model(std::istream& in);
Model load_model(const std::filesystem::path& path);

}  // namespace sien::congruity
