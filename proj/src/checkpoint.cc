// Copyright 2026 The NavForge Authors
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

#include "navforge/checkpoint.h"

#include <bit>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "navforge/errors.h"

namespace navforge {
namespace {

constexpr char kMagic[8] = {'N', 'V', 'F', 'G', 'C', 'K', 'P', 'T'};

static_assert(std::endian::native == std::endian::little,
              "checkpoint I/O assumes a little-endian host");

uint64_t fnv1a(const char* data, size_t n) {
  uint64_t h = 1469598103934665603ull;
  for (size_t i = 0; i < n; ++i) {
    h ^= static_cast<unsigned char>(data[i]);
    h *= 1099511628211ull;
  }
  return h;
}

std::string hex(uint64_t v) {
  std::ostringstream s;
  s << std::hex << std::setw(16) << std::setfill('0') << v;
  return s.str();
}

struct TensorEntry {
  std::string name;
  std::vector<int> shape;
  int offset;  // in floats, within the flat parameter vector
  int size;
};

void add_mlp(std::vector<TensorEntry>& out, const std::string& prefix,
             const Mlp<float>& mlp, int base) {
  const auto& s = mlp.sizes();
  for (int l = 0; l < mlp.num_layers(); ++l) {
    const std::string p = prefix + "." + std::to_string(l);
    out.push_back({p + ".weight", {s[l + 1], s[l]},
                   base + mlp.weight_offset(l), s[l + 1] * s[l]});
    out.push_back({p + ".bias", {s[l + 1]}, base + mlp.bias_offset(l),
                   s[l + 1]});
  }
}

std::vector<TensorEntry> tensor_layout(const ActorCritic<float>& m) {
  std::vector<TensorEntry> t;
  add_mlp(t, "actor", m.actor(), 0);
  if (m.log_std_size() > 0) {
    t.push_back({"log_std", {m.log_std_size()}, m.log_std_offset(),
                 m.log_std_size()});
  }
  add_mlp(t, "critic", m.critic(), m.critic_offset());
  return t;
}

Json scaler_json(const RunningScaler& s) {
  return {{"count", s.count()},
          {"mean", s.mean()},
          {"variance", s.variance()},
          {"clip", s.clip()},
          {"epsilon", s.epsilon()}};
}

RunningScaler scaler_from_json(const Json& j, const std::string& what) {
  try {
    RunningScaler s(static_cast<int>(j.at("mean").size()),
                    j.at("clip").get<double>(), j.at("epsilon").get<double>());
    s.set_state(j.at("count").get<double>(),
                j.at("mean").get<std::vector<double>>(),
                j.at("variance").get<std::vector<double>>());
    return s;
  } catch (const std::exception& e) {
    throw FormatError("checkpoint: bad " + what + " statistics: " + e.what());
  }
}

template <class T>
void put(std::ostream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

}  // namespace

void save_checkpoint(const std::string& path, const Agent& agent,
                     const Json& config, const Json& training_state) {
  const auto& m = agent.model;
  const std::vector<TensorEntry> layout = tensor_layout(m);
  std::vector<float> data;
  data.reserve(m.num_params());
  Json dir = Json::array();
  for (const auto& t : layout) {
    dir.push_back({{"name", t.name},
                   {"shape", t.shape},
                   {"dtype", "float32"},
                   {"offset", data.size() * sizeof(float)}});
    data.insert(data.end(), m.params().begin() + t.offset,
                m.params().begin() + t.offset + t.size);
  }
  const char* bytes = reinterpret_cast<const char*>(data.data());
  const size_t nbytes = data.size() * sizeof(float);

  Json header;
  header["format"] = "navforge-checkpoint";
  header["config"] = config;
  header["policy"] = {{"spec", to_json(m.spec())},
                      {"obs_dim", m.obs_dim()},
                      {"action_dim", m.action_dim()}};
  header["tensors"] = dir;
  header["tensor_bytes"] = nbytes;
  header["obs_scaler"] = scaler_json(agent.obs_scaler);
  header["value_scaler"] = scaler_json(agent.value_scaler);
  header["training_state"] = training_state;
  header["checksum"] = hex(fnv1a(bytes, nbytes));
  const std::string text = header.dump();

  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write checkpoint " + path);
  out.write(kMagic, sizeof(kMagic));
  put<uint32_t>(out, kCheckpointVersion);
  put<uint32_t>(out, static_cast<uint32_t>(text.size()));
  out.write(text.data(), text.size());
  out.write(bytes, nbytes);
  if (!out) throw ConfigError("failed writing checkpoint " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open checkpoint " + path);
  std::string blob((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  const std::string where = "checkpoint " + path + ": ";
  if (blob.size() < 16 || std::memcmp(blob.data(), kMagic, 8) != 0) {
    throw FormatError(where + "bad magic (not a checkpoint file)");
  }
  uint32_t version, len;
  std::memcpy(&version, blob.data() + 8, 4);
  std::memcpy(&len, blob.data() + 12, 4);
  if (version != kCheckpointVersion) {
    throw FormatError(where + "unsupported version " + std::to_string(version));
  }
  if (16 + size_t(len) > blob.size()) {
    throw FormatError(where + "truncated header");
  }
  Json header;
  try {
    header = Json::parse(blob.begin() + 16, blob.begin() + 16 + len);
  } catch (const std::exception& e) {
    throw FormatError(where + "header is not valid JSON: " + e.what());
  }
  const char* tensors = blob.data() + 16 + len;
  const size_t nbytes = blob.size() - 16 - len;

  Checkpoint ck;
  try {
    if (header.at("tensor_bytes").get<size_t>() != nbytes) {
      throw FormatError(where + "tensor block has " + std::to_string(nbytes) +
                        " bytes, header says " +
                        header.at("tensor_bytes").dump());
    }
    if (header.at("checksum").get<std::string>() != hex(fnv1a(tensors, nbytes))) {
      throw FormatError(where + "checksum mismatch (corrupted tensor data)");
    }
    PolicySpec spec;
    merge_json(header.at("policy").at("spec"), spec, "policy.spec");
    const int obs_dim = header.at("policy").at("obs_dim").get<int>();
    const int action_dim = header.at("policy").at("action_dim").get<int>();
    ck.agent.model = ActorCritic<float>(spec, obs_dim, action_dim);
    const auto layout = tensor_layout(ck.agent.model);
    const Json& dir = header.at("tensors");
    if (dir.size() != layout.size()) {
      throw FormatError(where + "tensor directory does not match the policy");
    }
    for (size_t i = 0; i < layout.size(); ++i) {
      const auto& t = layout[i];
      if (dir[i].at("name").get<std::string>() != t.name ||
          dir[i].at("shape").get<std::vector<int>>() != t.shape ||
          dir[i].at("dtype").get<std::string>() != "float32") {
        throw FormatError(where + "unexpected tensor entry " + dir[i].dump());
      }
      const size_t off = dir[i].at("offset").get<size_t>();
      if (off + t.size * sizeof(float) > nbytes) {
        throw FormatError(where + "tensor " + t.name + " out of range");
      }
      std::memcpy(ck.agent.model.params().data() + t.offset, tensors + off,
                  t.size * sizeof(float));
    }
    ck.agent.obs_scaler = scaler_from_json(header.at("obs_scaler"), "observation");
    ck.agent.value_scaler = scaler_from_json(header.at("value_scaler"), "value");
    if (ck.agent.obs_scaler.dim() != obs_dim ||
        ck.agent.value_scaler.dim() != 1) {
      throw FormatError(where + "standardizer sizes do not match the policy");
    }
    ck.config = header.at("config");
    ck.training_state = header.at("training_state");
  } catch (const FormatError&) {
    throw;
  } catch (const std::exception& e) {
    throw FormatError(where + e.what());
  }
  return ck;
}

}  // namespace navforge
