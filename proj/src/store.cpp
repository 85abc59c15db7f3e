// SPDX-License-Identifier: MIT
// Copyright (c) 2026 The qcomp developers

#include "qcomp/store.hpp"

#include <nlohmann/json.hpp>

#include <fstream>

namespace qcomp {

using nlohmann::json;

ResultStore::Key ResultStore::key_of(const StoreRow& row) {
  return {row.circuit_hash, row.device_id, row.fom_id, row.catalog,
          row.policy_hash};
}

ResultStore::ResultStore(std::string path) : path_(std::move(path)) {
  if (path_.empty()) {
    return;
  }
  std::ifstream in(path_);
  if (!in) {
    return; // fresh store
  }
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) {
      continue;
    }
    json j;
    try {
      j = json::parse(line);
      StoreRow row;
      row.circuit_hash = j.at("circuit").get<std::string>();
      row.device_id = j.at("device").get<std::string>();
      row.fom_id = j.at("fom").get<std::string>();
      row.catalog = j.at("catalog").get<std::string>();
      row.policy_hash = j.at("policy").get<std::string>();
      row.score = j.at("score").get<double>();
      row.pass_log = j.at("passes").get<std::vector<std::string>>();
      rows_.emplace(key_of(row), std::move(row));
    } catch (const json::exception& e) {
      throw StoreError("corrupt store row at " + path_ + ":" +
                       std::to_string(line_no) + ": " + e.what());
    }
  }
}

const StoreRow* ResultStore::find(const Key& key) const {
  const auto it = rows_.find(key);
  return it == rows_.end() ? nullptr : &it->second;
}

bool ResultStore::append(const StoreRow& row) {
  const auto key = key_of(row);
  if (rows_.count(key) != 0) {
    return false;
  }
  if (!path_.empty()) {
    std::ofstream out(path_, std::ios::app);
    if (!out) {
      throw StoreError("cannot append to store file '" + path_ + "'");
    }
    json j;
    j["circuit"] = row.circuit_hash;
    j["device"] = row.device_id;
    j["fom"] = row.fom_id;
    j["catalog"] = row.catalog;
    j["policy"] = row.policy_hash;
    j["score"] = row.score;
    j["passes"] = row.pass_log;
    out << j.dump() << "\n";
  }
  rows_.emplace(key, row);
  return true;
}

} // namespace qcomp
