#include "fpnet/io.hpp"

#include <openssl/evp.h>

#include <array>
#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace fpnet {

namespace {

Vector vector_from_json(const json& j, const char* what) {
  if (!j.is_array()) throw std::invalid_argument(std::string(what) + ": expected an array");
  Vector v;
  v.reserve(j.size());
  for (const auto& x : j) {
    if (!x.is_number()) throw std::invalid_argument(std::string(what) + ": expected numbers");
    v.push_back(x.get<double>());
  }
  return v;
}

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw std::invalid_argument(std::string("net file: missing field '") + key + "'");
  }
  return j.at(key);
}

void check_keys(const json& j, std::initializer_list<const char*> keys, const char* what) {
  if (!j.is_object()) throw std::invalid_argument(std::string(what) + ": expected an object");
  for (const auto& [k, v] : j.items()) {
    bool known = false;
    for (const char* key : keys) known = known || k == key;
    if (!known) throw std::invalid_argument(std::string(what) + ": unknown key '" + k + "'");
  }
}

template <class T>
void read_key(const json& j, const char* key, T& dst) {
  if (j.contains(key)) dst = j.at(key).get<T>();
}

}  // namespace

json to_json(const FixedPointConfig& c) {
  return json{{"delta", c.delta},         {"t_initial", c.t_initial}, {"t_limit", c.t_limit},
              {"growth", c.growth},       {"rel_tol", c.rel_tol},     {"abs_tol", c.abs_tol},
              {"max_error", c.max_error}, {"lag", c.lag},             {"divergence_limit", c.divergence_limit},
              {"start_from_input", c.start_from_input}};
}

FixedPointConfig fixed_point_config_from_json(const json& j) {
  check_keys(j, {"delta", "t_initial", "t_limit", "growth", "rel_tol", "abs_tol", "max_error", "lag",
                 "divergence_limit", "start_from_input"},
             "fixed point config");
  FixedPointConfig c;
  read_key(j, "delta", c.delta);
  read_key(j, "t_initial", c.t_initial);
  read_key(j, "t_limit", c.t_limit);
  read_key(j, "growth", c.growth);
  read_key(j, "rel_tol", c.rel_tol);
  read_key(j, "abs_tol", c.abs_tol);
  read_key(j, "max_error", c.max_error);
  read_key(j, "lag", c.lag);
  read_key(j, "divergence_limit", c.divergence_limit);
  read_key(j, "start_from_input", c.start_from_input);
  return c;
}

json to_json(const TrainConfig& c) {
  return json{{"batch_size", c.batch_size},
              {"max_iterations", c.max_iterations},
              {"smoothing_window", c.smoothing_window},
              {"convergence_rel_tol", c.convergence_rel_tol},
              {"jitter_std", c.jitter_std},
              {"seed", c.seed},
              {"filter", to_string(c.filter)}};
}

TrainConfig train_config_from_json(const json& j) {
  check_keys(j, {"batch_size", "max_iterations", "smoothing_window", "convergence_rel_tol", "jitter_std",
                 "seed", "filter"},
             "train config");
  TrainConfig c;
  read_key(j, "batch_size", c.batch_size);
  read_key(j, "max_iterations", c.max_iterations);
  read_key(j, "smoothing_window", c.smoothing_window);
  read_key(j, "convergence_rel_tol", c.convergence_rel_tol);
  read_key(j, "jitter_std", c.jitter_std);
  read_key(j, "seed", c.seed);
  if (j.contains("filter")) c.filter = target_filter_from_string(j.at("filter").get<std::string>());
  return c;
}

json to_json(const AdamConfig& c) {
  return json{{"alpha", c.alpha}, {"beta1", c.beta1}, {"beta2", c.beta2}, {"epsilon", c.epsilon}};
}

AdamConfig adam_config_from_json(const json& j) {
  check_keys(j, {"alpha", "beta1", "beta2", "epsilon"}, "adam config");
  AdamConfig c;
  read_key(j, "alpha", c.alpha);
  read_key(j, "beta1", c.beta1);
  read_key(j, "beta2", c.beta2);
  read_key(j, "epsilon", c.epsilon);
  return c;
}

json to_json(const Matrix& m) {
  json rows = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw std::invalid_argument("matrix: expected a nonempty array of rows");
  const std::size_t rows = j.size();
  const std::size_t cols = j[0].size();
  Vector entries;
  entries.reserve(rows * cols);
  for (const auto& row : j) {
    Vector r = vector_from_json(row, "matrix row");
    if (r.size() != cols) throw std::invalid_argument("matrix: ragged rows");
    entries.insert(entries.end(), r.begin(), r.end());
  }
  return Matrix(rows, cols, std::move(entries));
}

json net_to_json(const RecurrentNet& net, const json& meta) {
  return json{{"kind", "recurrent"},
              {"n", net.size()},
              {"weights", to_json(net.weights())},
              {"biases", net.bias()},
              {"tau", net.tau()},
              {"meta", meta}};
}

json net_to_json(const FeedForwardNet& net, const json& meta) {
  return json{{"kind", "feedforward"},
              {"n_in", net.n_in()},
              {"n_hidden", net.n_hidden()},
              {"n_out", net.n_out()},
              {"weights", json::array({to_json(net.w1), to_json(net.w2)})},
              {"biases", json::array({net.b1, net.b2})},
              {"meta", meta}};
}

RecurrentNet recurrent_from_json(const json& j) {
  if (field(j, "kind") != "recurrent") throw std::invalid_argument("net file: not a recurrent net");
  Matrix w = matrix_from_json(field(j, "weights"));
  Vector b = vector_from_json(field(j, "biases"), "biases");
  const double tau = field(j, "tau").get<double>();
  if (j.contains("n") && j.at("n").get<std::size_t>() != w.rows()) {
    throw std::invalid_argument("net file: n does not match the weight matrix");
  }
  return RecurrentNet(std::move(w), std::move(b), tau);
}

FeedForwardNet feedforward_from_json(const json& j) {
  if (field(j, "kind") != "feedforward") throw std::invalid_argument("net file: not a feed-forward net");
  const json& w = field(j, "weights");
  const json& b = field(j, "biases");
  if (!w.is_array() || w.size() != 2 || !b.is_array() || b.size() != 2) {
    throw std::invalid_argument("net file: feed-forward nets have two weight matrices and two bias vectors");
  }
  FeedForwardNet net(matrix_from_json(w[0]), matrix_from_json(w[1]), vector_from_json(b[0], "biases"),
                     vector_from_json(b[1], "biases"));
  if (j.contains("n_in") && (j.at("n_in").get<std::size_t>() != net.n_in() ||
                             j.at("n_hidden").get<std::size_t>() != net.n_hidden() ||
                             j.at("n_out").get<std::size_t>() != net.n_out())) {
    throw std::invalid_argument("net file: declared sizes do not match the weights");
  }
  return net;
}

NetVariant net_from_json(const json& j) {
  const auto& kind = field(j, "kind");
  if (kind == "recurrent") return recurrent_from_json(j);
  if (kind == "feedforward") return feedforward_from_json(j);
  throw std::invalid_argument("net file: unknown kind " + kind.dump());
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(path.string() + ": " + e.what());
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

void write_json_file(const std::filesystem::path& path, const json& j) {
  write_text_file(path, j.dump(2) + "\n");
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string format_double(double v) {
  std::array<char, 32> buf;
  auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

std::string sha256_hex(const std::string& bytes) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> md;
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md.data(), &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("sha256 failed");
  }
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int k = 0; k < len; ++k) {
    out.push_back(hex[md[k] >> 4]);
    out.push_back(hex[md[k] & 15]);
  }
  return out;
}

std::string sha256_file(const std::filesystem::path& path) { return sha256_hex(read_text_file(path)); }

}  // namespace fpnet
