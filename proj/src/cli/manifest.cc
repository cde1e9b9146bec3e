// Copyright 2026 The infoload Authors
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

#include "cli/manifest.h"

#include <openssl/evp.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <memory>

#include <json.hpp>

#include "infoload/error.h"

namespace infoload::cli {

InputDigest digest_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path);
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(),
                                                              &EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1)
    throw Error("SHA-256 unavailable");
  InputDigest d;
  d.path = path;
  std::array<char, 1 << 16> buf;
  while (in) {
    in.read(buf.data(), buf.size());
    const auto got = in.gcount();
    if (got <= 0) break;
    EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(got));
    d.bytes += static_cast<std::uint64_t>(got);
  }
  if (in.bad()) throw InputError("error reading " + path);
  std::array<unsigned char, EVP_MAX_MD_SIZE> md;
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), md.data(), &len);
  static constexpr char kHex[] = "0123456789abcdef";
  for (unsigned int i = 0; i < len; ++i) {
    d.sha256 += kHex[md[i] >> 4];
    d.sha256 += kHex[md[i] & 15];
  }
  return d;
}

std::string RunManifest::to_json() const {
  nlohmann::ordered_json j;
  j["command"] = command;
  j["tool_version"] = tool_version;
  j["seed"] = seed ? nlohmann::ordered_json(*seed) : nlohmann::ordered_json();
  j["workers"] = workers;
  j["config"] = config;
  auto& in = j["inputs"] = nlohmann::ordered_json::array();
  for (const auto& d : inputs)
    in.push_back({{"path", d.path}, {"bytes", d.bytes}, {"sha256", d.sha256}});
  j["outputs"] = outputs;
  return j.dump(2) + "\n";
}

void write_file_atomic(const std::filesystem::path& path,
                       std::string_view contents) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write " + tmp.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.flush();
    if (!out) throw InputError("error writing " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw InputError("cannot move " + tmp.string() + " to " + path.string() +
                     ": " + ec.message());
  }
}

}  // namespace infoload::cli
