// Copyright 2026 The Dialflow Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dialflow/model/checkpoint.h"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace dialflow {

namespace {

constexpr char kMagic[4] = {'D', 'P', 'M', '1'};

template <typename U>
void put(std::string& out, U v) {
  for (size_t i = 0; i < sizeof(U); ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

class Reader {
 public:
  explicit Reader(const std::string& b) : b_(b) {}

  template <typename U>
  U get() {
    need(sizeof(U));
    U v = 0;
    for (size_t i = 0; i < sizeof(U); ++i) {
      v |= static_cast<U>(static_cast<unsigned char>(b_[pos_ + i])) << (8 * i);
    }
    pos_ += sizeof(U);
    return v;
  }

  std::string bytes(size_t n) {
    need(n);
    std::string s = b_.substr(pos_, n);
    pos_ += n;
    return s;
  }

  bool done() const { return pos_ == b_.size(); }

 private:
  void need(size_t n) const {
    if (b_.size() - pos_ < n) throw std::runtime_error("checkpoint: truncated");
  }
  const std::string& b_;
  size_t pos_ = 0;
};

}  // namespace

std::string serialize_checkpoint(const PlanningModel& model) {
  const ModelConfig& cfg = model.config();
  nlohmann::json header;
  header["config"] = cfg.to_json();
  header["vocab"] = model.vocab().words();
  const std::string blob = header.dump();

  std::string out(kMagic, 4);
  put<uint32_t>(out, kCheckpointVersion);
  put<uint32_t>(out, static_cast<uint32_t>(blob.size()));
  out += blob;
  const auto tensors = model.params().tensors();
  put<uint32_t>(out, static_cast<uint32_t>(tensors.size()));
  const bool f32 = cfg.float_width == 32;
  for (const auto& t : tensors) {
    put<uint32_t>(out, static_cast<uint32_t>(t.name.size()));
    out += t.name;
    out.push_back(static_cast<char>(f32 ? 1 : 0));
    put<uint32_t>(out, 2);
    const Mat& m = *t.tensor;
    put<uint64_t>(out, static_cast<uint64_t>(m.rows()));
    put<uint64_t>(out, static_cast<uint64_t>(m.cols()));
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      for (Eigen::Index c = 0; c < m.cols(); ++c) {
        if (f32) {
          put<uint32_t>(out, std::bit_cast<uint32_t>(static_cast<float>(m(r, c))));
        } else {
          put<uint64_t>(out, std::bit_cast<uint64_t>(m(r, c)));
        }
      }
    }
  }
  return out;
}

PlanningModel parse_checkpoint(const std::string& bytes) {
  Reader in(bytes);
  if (in.bytes(4) != std::string(kMagic, 4)) throw std::runtime_error("checkpoint: bad magic");
  const auto version = in.get<uint32_t>();
  if (version != kCheckpointVersion) {
    throw std::runtime_error("checkpoint: unsupported version " + std::to_string(version));
  }
  const std::string blob = in.bytes(in.get<uint32_t>());
  ModelConfig cfg;
  std::vector<std::string> words;
  try {
    const auto header = nlohmann::json::parse(blob);
    cfg = ModelConfig::from_json(header.at("config"));
    words = header.at("vocab").get<std::vector<std::string>>();
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(std::string("checkpoint: bad header: ") + e.what());
  }
  Vocabulary vocab(words);
  ModelParams params = ModelParams::zeros(cfg);
  auto tensors = params.tensors();
  const auto count = in.get<uint32_t>();
  if (count != tensors.size()) throw std::runtime_error("checkpoint: wrong tensor count");
  for (auto& t : tensors) {
    const std::string name = in.bytes(in.get<uint32_t>());
    if (name != t.name) throw std::runtime_error("checkpoint: expected tensor " + t.name + ", got " + name);
    const auto dtype = in.get<uint8_t>();
    if (dtype > 1) throw std::runtime_error("checkpoint: unknown dtype for " + name);
    if (in.get<uint32_t>() != 2) throw std::runtime_error("checkpoint: rank must be 2 for " + name);
    const auto rows = in.get<uint64_t>();
    const auto cols = in.get<uint64_t>();
    Mat& m = *t.tensor;
    if (rows != static_cast<uint64_t>(m.rows()) || cols != static_cast<uint64_t>(m.cols())) {
      throw std::runtime_error("checkpoint: shape mismatch for " + name);
    }
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      for (Eigen::Index c = 0; c < m.cols(); ++c) {
        const double v = dtype == 1 ? static_cast<double>(std::bit_cast<float>(in.get<uint32_t>()))
                                    : std::bit_cast<double>(in.get<uint64_t>());
        if (!std::isfinite(v)) throw std::runtime_error("checkpoint: non-finite value in " + name);
        m(r, c) = v;
      }
    }
  }
  if (!in.done()) throw std::runtime_error("checkpoint: trailing bytes");
  return PlanningModel(cfg, std::move(vocab), std::move(params));
}

void save_checkpoint(const PlanningModel& model, const std::filesystem::path& path) {
  const std::string bytes = serialize_checkpoint(model);
  const auto tmp = std::filesystem::path(path.string() + ".tmp");
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("checkpoint: cannot write " + tmp.string());
    f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!f) throw std::runtime_error("checkpoint: write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

PlanningModel load_checkpoint(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("checkpoint: cannot open " + path.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_checkpoint(ss.str());
}

}  // namespace dialflow
