// Copyright 2026 The faithgen Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "faithgen/model/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

#include "faithgen/common/error.hpp"

namespace faithgen::model {

namespace {

constexpr char kMagic[8] = {'F', 'G', 'C', 'K', 'P', 'T', '0', '1'};

static_assert(std::endian::native == std::endian::little, "checkpoints assume a little-endian host");

template <typename T>
constexpr Precision precision_of() {
  return sizeof(T) == 4 ? Precision::float32 : Precision::float64;
}

template <typename R>
std::string rng_state(const R& rng) {
  std::ostringstream os;
  os << rng;
  return os.str();
}

template <typename R>
void restore_rng(R& rng, const std::string& state, const std::string& what) {
  std::istringstream is(state);
  is >> rng;
  if (!is) throw DataError("checkpoint has a malformed " + what + " RNG state");
}

template <typename T>
void write_tensor(std::ostream& out, const Matrix<T>& m) {
  out.write(reinterpret_cast<const char*>(m.data()), static_cast<std::streamsize>(m.size() * sizeof(T)));
}

template <typename T>
void read_tensor(std::istream& in, Matrix<T>& m, const std::filesystem::path& path) {
  in.read(reinterpret_cast<char*>(m.data()), static_cast<std::streamsize>(m.size() * sizeof(T)));
  if (!in) throw DataError("checkpoint " + path.string() + " is truncated");
}

std::ifstream open_and_read_header(const std::filesystem::path& path, nlohmann::json& header) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open checkpoint " + path.string());
  char magic[8];
  in.read(magic, sizeof magic);
  if (!in || std::memcmp(magic, kMagic, sizeof magic) != 0) {
    throw DataError(path.string() + " is not a faithgen checkpoint");
  }
  std::uint64_t length = 0;
  in.read(reinterpret_cast<char*>(&length), sizeof length);
  if (!in || length > (1u << 26)) throw DataError("checkpoint " + path.string() + " has a corrupt header");
  std::string text(length, '\0');
  in.read(text.data(), static_cast<std::streamsize>(length));
  if (!in) throw DataError("checkpoint " + path.string() + " is truncated");
  try {
    header = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw DataError("checkpoint " + path.string() + " has a corrupt header: " + e.what());
  }
  return in;
}

CheckpointHeader parse_header(const nlohmann::json& j) {
  CheckpointHeader h;
  try {
    h.config = ModelConfig::from_json(j.at("config"));
    h.precision = precision_from_string(j.at("precision").get<std::string>());
    h.vocab_hash = j.at("vocab_hash").get<std::string>();
    h.has_optimizer = j.at("has_optimizer").get<bool>();
    h.adam_steps = j.at("adam_steps").get<std::int64_t>();
    h.epoch = j.at("epoch").get<int>();
    h.model_rng = j.at("model_rng").get<std::string>();
    h.shuffle_rng = j.at("shuffle_rng").get<std::string>();
    h.metadata = j.value("metadata", nlohmann::json::object());
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("checkpoint header: ") + e.what());
  }
  return h;
}

}  // namespace

template <typename T>
void save_checkpoint(const std::filesystem::path& path, Seq2Seq<T>& model, Trainer<T>* trainer,
                     const std::string& vocab_hash, const nlohmann::json& metadata) {
  auto& params = model.parameters();
  nlohmann::json shapes = nlohmann::json::array();
  for (std::size_t i = 0; i < params.size(); ++i) {
    shapes.push_back({{"name", params[i].name}, {"rows", params[i].value.rows()}, {"cols", params[i].value.cols()}});
  }
  const nlohmann::json header = {
      {"config", model.config().to_json()},
      {"precision", to_string(precision_of<T>())},
      {"vocab_hash", vocab_hash},
      {"has_optimizer", trainer != nullptr},
      {"adam_steps", trainer ? trainer->optimizer().steps() : 0},
      {"epoch", trainer ? trainer->epoch() : 0},
      {"model_rng", rng_state(model.rng())},
      {"shuffle_rng", trainer ? rng_state(trainer->shuffle_rng()) : std::string()},
      {"parameters", shapes},
      {"metadata", metadata},
  };
  const std::string text = header.dump();
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  const auto tmp = std::filesystem::path(path.string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write checkpoint " + path.string());
    out.write(kMagic, sizeof kMagic);
    const std::uint64_t length = text.size();
    out.write(reinterpret_cast<const char*>(&length), sizeof length);
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    for (std::size_t i = 0; i < params.size(); ++i) write_tensor(out, params[i].value);
    if (trainer) {
      for (const auto& m : trainer->optimizer().first_moments()) write_tensor(out, m);
      for (const auto& v : trainer->optimizer().second_moments()) write_tensor(out, v);
    }
    if (!out) throw Error("failed writing checkpoint " + path.string());
  }
  std::filesystem::rename(tmp, path);
}

CheckpointHeader read_checkpoint_header(const std::filesystem::path& path) {
  nlohmann::json j;
  open_and_read_header(path, j);
  return parse_header(j);
}

template <typename T>
CheckpointHeader load_checkpoint(const std::filesystem::path& path, Seq2Seq<T>& model, Trainer<T>* trainer) {
  nlohmann::json j;
  auto in = open_and_read_header(path, j);
  CheckpointHeader h = parse_header(j);
  if (h.precision != precision_of<T>()) {
    throw DataError("checkpoint precision " + to_string(h.precision) + " does not match the model");
  }
  if (h.config.to_json() != model.config().to_json()) {
    throw DataError("checkpoint config does not match the model config");
  }
  if (trainer && !h.has_optimizer) throw DataError("checkpoint has no optimizer state to resume from");
  auto& params = model.parameters();
  const auto& shapes = j.at("parameters");
  if (shapes.size() != params.size()) throw DataError("checkpoint parameter count does not match the model");
  for (std::size_t i = 0; i < params.size(); ++i) {
    const auto& s = shapes[i];
    if (s.at("name").get<std::string>() != params[i].name || s.at("rows").get<Eigen::Index>() != params[i].value.rows() ||
        s.at("cols").get<Eigen::Index>() != params[i].value.cols()) {
      throw DataError("checkpoint parameter " + std::to_string(i) + " does not match '" + params[i].name + "'");
    }
  }
  for (std::size_t i = 0; i < params.size(); ++i) read_tensor(in, params[i].value, path);
  if (h.has_optimizer) {
    if (trainer) {
      auto& adam = trainer->optimizer();
      for (auto& m : adam.first_moments()) read_tensor(in, m, path);
      for (auto& v : adam.second_moments()) read_tensor(in, v, path);
      adam.set_steps(h.adam_steps);
      trainer->set_epoch(h.epoch);
      restore_rng(trainer->shuffle_rng(), h.shuffle_rng, "shuffle");
    } else {
      in.seekg(0, std::ios::end);
    }
  }
  if (trainer || !h.has_optimizer) {
    if (in.peek() != std::char_traits<char>::eof()) throw DataError("checkpoint " + path.string() + " has trailing bytes");
  }
  restore_rng(model.rng(), h.model_rng, "model");
  return h;
}

template void save_checkpoint<float>(const std::filesystem::path&, Seq2Seq<float>&, Trainer<float>*,
                                     const std::string&, const nlohmann::json&);
template void save_checkpoint<double>(const std::filesystem::path&, Seq2Seq<double>&, Trainer<double>*,
                                      const std::string&, const nlohmann::json&);
template CheckpointHeader load_checkpoint<float>(const std::filesystem::path&, Seq2Seq<float>&, Trainer<float>*);
template CheckpointHeader load_checkpoint<double>(const std::filesystem::path&, Seq2Seq<double>&, Trainer<double>*);

}  // namespace faithgen::model
