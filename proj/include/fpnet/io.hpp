#pragma once

#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "fpnet/ffnet.hpp"
#include "fpnet/optim.hpp"
#include "fpnet/recurrent.hpp"

namespace fpnet {

using json = nlohmann::json;

// Net files. Doubles are written in shortest round-trip form, so
// parse(serialize(net)) == net bit for bit.
json to_json(const Matrix& m);
Matrix matrix_from_json(const json& j);

json net_to_json(const RecurrentNet& net, const json& meta = json::object());
json net_to_json(const FeedForwardNet& net, const json& meta = json::object());
RecurrentNet recurrent_from_json(const json& j);
FeedForwardNet feedforward_from_json(const json& j);

using NetVariant = std::variant<RecurrentNet, FeedForwardNet>;
NetVariant net_from_json(const json& j);

// Config records. Missing keys keep their defaults; unknown keys are rejected.
json to_json(const FixedPointConfig& c);
FixedPointConfig fixed_point_config_from_json(const json& j);
json to_json(const TrainConfig& c);
TrainConfig train_config_from_json(const json& j);
json to_json(const AdamConfig& c);
AdamConfig adam_config_from_json(const json& j);

json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const json& j);
void write_text_file(const std::filesystem::path& path, const std::string& text);
std::string read_text_file(const std::filesystem::path& path);

/// Locale-independent shortest round-trip formatting.
std::string format_double(double v);

/// Hex SHA-256 of a file's bytes.
std::string sha256_file(const std::filesystem::path& path);
std::string sha256_hex(const std::string& bytes);

}  // namespace fpnet
