#include "zsg/game_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "zsg/csv.hpp"

namespace zsg {

namespace {

// Token reader that treats all whitespace (including newlines) uniformly.
class TokenReader {
 public:
  explicit TokenReader(const std::string& path) : path_(path), in_(path) {
    if (!in_) throw std::invalid_argument("cannot open: " + path);
  }

  std::string word() {
    std::string w;
    if (!(in_ >> w)) throw std::invalid_argument(path_ + ": unexpected end of file");
    return w;
  }

  void expect(const std::string& literal) {
    std::string w = word();
    if (w != literal)
      throw std::invalid_argument(path_ + ": expected '" + literal + "', found '" + w + "'");
  }

  long integer() {
    std::string w = word();
    size_t used = 0;
    long v = 0;
    try {
      v = std::stol(w, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument(path_ + ": expected an integer, found '" + w + "'");
    }
    if (used != w.size())
      throw std::invalid_argument(path_ + ": expected an integer, found '" + w + "'");
    return v;
  }

  double number() {
    std::string w = word();
    size_t used = 0;
    double v = 0;
    try {
      v = std::stod(w, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument(path_ + ": expected a number, found '" + w + "'");
    }
    if (used != w.size())
      throw std::invalid_argument(path_ + ": expected a number, found '" + w + "'");
    return v;
  }

 private:
  std::string path_;
  std::ifstream in_;
};

void write_row(std::ofstream& out, const Eigen::Ref<const Eigen::RowVectorXd>& row) {
  for (int i = 0; i < row.size(); ++i) {
    if (i) out << ' ';
    out << format_g17(row[i]);
  }
  out << '\n';
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  return out;
}

} // namespace

void save_game(const StochasticGame& game, const std::string& path) {
  std::ofstream out = open_out(path);
  out << "zsg-game v1\n";
  out << "states " << game.num_states << '\n';
  out << "actions1 " << game.num_actions1 << '\n';
  out << "actions2 " << game.num_actions2 << '\n';
  out << "discount " << format_g17(game.discount) << '\n';
  out << "reward1\n";
  for (int s = 0; s < game.num_states; ++s)
    for (int a1 = 0; a1 < game.num_actions1; ++a1)
      write_row(out, game.reward1[s].row(a1));
  out << "transition\n";
  for (int s = 0; s < game.num_states; ++s)
    for (int row = 0; row < game.joint_actions(); ++row)
      write_row(out, game.transition[s].row(row));
  out << "end\n";
  if (!out) throw std::runtime_error("write failed: " + path);
}

StochasticGame load_game(const std::string& path) {
  TokenReader r(path);
  r.expect("zsg-game");
  r.expect("v1");
  StochasticGame game;
  r.expect("states");
  game.num_states = int(r.integer());
  r.expect("actions1");
  game.num_actions1 = int(r.integer());
  r.expect("actions2");
  game.num_actions2 = int(r.integer());
  r.expect("discount");
  game.discount = r.number();
  if (game.num_states < 1 || game.num_actions1 < 1 || game.num_actions2 < 1)
    throw std::invalid_argument(path + ": dimensions must be positive");

  r.expect("reward1");
  game.reward1.assign(game.num_states, Mat(game.num_actions1, game.num_actions2));
  for (int s = 0; s < game.num_states; ++s)
    for (int a1 = 0; a1 < game.num_actions1; ++a1)
      for (int a2 = 0; a2 < game.num_actions2; ++a2)
        game.reward1[s](a1, a2) = r.number();

  r.expect("transition");
  game.transition.assign(game.num_states,
                         Mat(game.num_actions1 * game.num_actions2, game.num_states));
  for (int s = 0; s < game.num_states; ++s)
    for (int row = 0; row < game.joint_actions(); ++row)
      for (int col = 0; col < game.num_states; ++col)
        game.transition[s](row, col) = r.number();

  r.expect("end");
  require_valid(game);
  return game;
}

void save_policy(const JointPolicy& policy, const std::string& path) {
  std::ofstream out = open_out(path);
  out << "zsg-policy v1\n";
  out << "states " << policy.pi1.rows() << '\n';
  out << "actions1 " << policy.pi1.cols() << '\n';
  out << "actions2 " << policy.pi2.cols() << '\n';
  out << "pi1\n";
  for (int s = 0; s < policy.pi1.rows(); ++s) write_row(out, policy.pi1.row(s));
  out << "pi2\n";
  for (int s = 0; s < policy.pi2.rows(); ++s) write_row(out, policy.pi2.row(s));
  out << "end\n";
  if (!out) throw std::runtime_error("write failed: " + path);
}

JointPolicy load_policy(const std::string& path) {
  TokenReader r(path);
  r.expect("zsg-policy");
  r.expect("v1");
  r.expect("states");
  int states = int(r.integer());
  r.expect("actions1");
  int a1 = int(r.integer());
  r.expect("actions2");
  int a2 = int(r.integer());
  if (states < 1 || a1 < 1 || a2 < 1)
    throw std::invalid_argument(path + ": dimensions must be positive");
  JointPolicy policy;
  policy.pi1.resize(states, a1);
  policy.pi2.resize(states, a2);
  r.expect("pi1");
  for (int s = 0; s < states; ++s)
    for (int a = 0; a < a1; ++a) policy.pi1(s, a) = r.number();
  r.expect("pi2");
  for (int s = 0; s < states; ++s)
    for (int a = 0; a < a2; ++a) policy.pi2(s, a) = r.number();
  r.expect("end");
  for (int s = 0; s < states; ++s) {
    if (std::abs(policy.pi1.row(s).sum() - 1.0) > 1e-9 ||
        policy.pi1.row(s).minCoeff() < -1e-12 ||
        std::abs(policy.pi2.row(s).sum() - 1.0) > 1e-9 ||
        policy.pi2.row(s).minCoeff() < -1e-12)
      throw std::invalid_argument(path + ": rows must be probability distributions");
  }
  return policy;
}

void save_features(const FeatureMap& features, const std::string& path) {
  std::ofstream out = open_out(path);
  out << "zsg-features v1\n";
  out << "rows1 " << features.phi1.rows() << '\n';
  out << "dim1 " << features.phi1.cols() << '\n';
  out << "rows2 " << features.phi2.rows() << '\n';
  out << "dim2 " << features.phi2.cols() << '\n';
  out << "phi1\n";
  for (int r = 0; r < features.phi1.rows(); ++r) write_row(out, features.phi1.row(r));
  out << "phi2\n";
  for (int r = 0; r < features.phi2.rows(); ++r) write_row(out, features.phi2.row(r));
  out << "end\n";
  if (!out) throw std::runtime_error("write failed: " + path);
}

FeatureMap load_features(const std::string& path) {
  TokenReader r(path);
  r.expect("zsg-features");
  r.expect("v1");
  r.expect("rows1");
  int rows1 = int(r.integer());
  r.expect("dim1");
  int dim1 = int(r.integer());
  r.expect("rows2");
  int rows2 = int(r.integer());
  r.expect("dim2");
  int dim2 = int(r.integer());
  if (rows1 < 1 || dim1 < 1 || rows2 < 1 || dim2 < 1)
    throw std::invalid_argument(path + ": dimensions must be positive");
  FeatureMap f;
  f.phi1.resize(rows1, dim1);
  f.phi2.resize(rows2, dim2);
  r.expect("phi1");
  for (int i = 0; i < rows1; ++i)
    for (int j = 0; j < dim1; ++j) f.phi1(i, j) = r.number();
  r.expect("phi2");
  for (int i = 0; i < rows2; ++i)
    for (int j = 0; j < dim2; ++j) f.phi2(i, j) = r.number();
  r.expect("end");
  return f;
}

} // namespace zsg
