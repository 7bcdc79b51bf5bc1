// SPDX-License-Identifier: Apache-2.0
#include "sien/congruity/model_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

#include "sien/congruity/dataset.hpp"
#include "sien/error.hpp"

namespace sien::congruity {

bool Model::operator==(const Model& o) const {
  const Hyperparams& a = hyper;
  const Hyperparams& b = o.hyper;
  return theta == o.theta && a.alpha == b.alpha && a.lambda_g == b.lambda_g && a.lambda_q == b.lambda_q &&
         a.lambda_p == b.lambda_p && a.lambda_k == b.lambda_k && a.q == b.q && a.k == b.k &&
         a.learning_rate == b.learning_rate && a.prune_probability == b.prune_probability &&
         a.batch_size == b.batch_size && a.max_epochs == b.max_epochs && a.tolerance == b.tolerance &&
         a.rng_seed == b.rng_seed && a.d_max == b.d_max;
}

void write_model(std::ostream& out, const Model& m) {
  const Hyperparams& h = m.hyper;
  out << "sien-model 1\n";
  out << "widths";
  for (std::size_t w : m.theta.widths()) out << ' ' << w;
  out << "\ndmax " << m.theta.d_max() << '\n';
  out << "alpha " << format_double(h.alpha) << '\n';
  out << "lambda_g " << format_double(h.lambda_g) << '\n';
  out << "lambda_q " << format_double(h.lambda_q) << '\n';
  out << "lambda_p " << format_double(h.lambda_p) << '\n';
  out << "lambda_k " << format_double(h.lambda_k) << '\n';
  out << "q " << h.q << '\n';
  out << "k " << h.k << '\n';
  out << "learning_rate " << format_double(h.learning_rate) << '\n';
  out << "prune_probability " << format_double(h.prune_probability) << '\n';
  out << "batch_size " << h.batch_size << '\n';
  out << "max_epochs " << h.max_epochs << '\n';
  out << "tolerance " << format_double(h.tolerance) << '\n';
  out << "rng_seed " << h.rng_seed << '\n';
  out << "hyper_dmax " << h.d_max << '\n';
  for (std::size_t l = 0; l < m.theta.layer_count(); ++l) {
    const Layer& layer = m.theta.layer(l);
    for (std::size_t j = 0; j < layer.width; ++j) {
      out << "w " << l << ' ' << j << ' ' << int(layer.alive[j]) << ' ' << format_double(layer.bias[j]);
      for (double c : layer.row(j)) out << ' ' << format_double(c);
      out << '\n';
    }
  }
}

std::string format_model(const Model& m) {
  std::ostringstream os;
  write_model(os, m);
  return os.str();
}

namespace {

[[noreturn]] void bad(std::size_t line, const std::string& what) {
  throw Error(Errc::ParseError, "model line " + std::to_string(line) + ": " + what);
}

template <typename T>
T number(const std::string& tok, std::size_t line) {
  T v{};
  const auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc{} || p != tok.data() + tok.size()) bad(line, "bad number '" + tok + "'");
  return v;
}

}  // namespace

Model read_model(std::istream& in) {
  Model m;
  std::vector<std::size_t> widths;
  std::size_t dmax = 0;
  bool have_params = false;
  std::vector<std::vector<std::uint8_t>> seen;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    std::istringstream ls(text);
    std::vector<std::string> tok;
    for (std::string t; ls >> t;) tok.push_back(t);
    if (tok.empty()) continue;
    const std::string& key = tok[0];
    if (line == 1) {
      if (tok.size() != 2 || key != "sien-model" || tok[1] != "1") bad(line, "missing 'sien-model 1' header");
      continue;
    }
    if (key == "widths") {
      for (std::size_t i = 1; i < tok.size(); ++i) widths.push_back(number<std::size_t>(tok[i], line));
      if (widths.size() < 2) bad(line, "need at least two layers");
      continue;
    }
    if (key == "w") {
      if (!have_params) {
        if (widths.empty()) bad(line, "weights before widths");
        m.theta = ParameterSet::zeros(widths, dmax);
        for (std::size_t w : widths) seen.emplace_back(w, 0);
        have_params = true;
      }
      if (tok.size() < 5) bad(line, "short weight line");
      const auto l = number<std::size_t>(tok[1], line);
      const auto j = number<std::size_t>(tok[2], line);
      if (l >= widths.size() || j >= widths[l]) bad(line, "neuron out of range");
      Layer& layer = m.theta.layer(l);
      if (tok.size() != 5 + layer.in_width) bad(line, "wrong connection count");
      if (seen[l][j]) bad(line, "duplicate neuron");
      seen[l][j] = 1;
      const int alive = number<int>(tok[3], line);
      if (alive != 0 && alive != 1) bad(line, "alive flag must be 0 or 1");
      layer.alive[j] = static_cast<std::uint8_t>(alive);
      layer.bias[j] = number<double>(tok[4], line);
      auto row = layer.row(j);
      for (std::size_t c = 0; c < row.size(); ++c) row[c] = number<double>(tok[5 + c], line);
      continue;
    }
    if (tok.size() != 2) bad(line, "expected '<key> <value>'");
    const std::string& v = tok[1];
    Hyperparams& h = m.hyper;
    if (key == "dmax") dmax = number<std::size_t>(v, line);
    else if (key == "alpha") h.alpha = number<double>(v, line);
    else if (key == "lambda_g") h.lambda_g = number<double>(v, line);
    else if (key == "lambda_q") h.lambda_q = number<double>(v, line);
    else if (key == "lambda_p") h.lambda_p = number<double>(v, line);
    else if (key == "lambda_k") h.lambda_k = number<double>(v, line);
    else if (key == "q") h.q = number<int>(v, line);
    else if (key == "k") h.k = number<std::size_t>(v, line);
    else if (key == "learning_rate") h.learning_rate = number<double>(v, line);
    else if (key == "prune_probability") h.prune_probability = number<double>(v, line);
    else if (key == "batch_size") h.batch_size = number<std::size_t>(v, line);
    else if (key == "max_epochs") h.max_epochs = number<std::size_t>(v, line);
    else if (key == "tolerance") h.tolerance = number<double>(v, line);
    else if (key == "rng_seed") h.rng_seed = number<std::uint64_t>(v, line);
    else if (key == "hyper_dmax") h.d_max = number<std::size_t>(v, line);
    else bad(line, "unknown key '" + key + "'");
  }
  if (line == 0) throw Error(Errc::ParseError, "empty model file");
  if (!have_params) throw Error(Errc::ParseError, "model has no weights");
  for (const auto& layer : seen) {
    for (auto s : layer) {
      if (!s) throw Error(Errc::ParseError, "model is missing neurons");
    }
  }
  return m;
}

Model load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::IoError, "cannot open " + path.string());
  return read_model(in);
}

}  // namespace sien::congruity
