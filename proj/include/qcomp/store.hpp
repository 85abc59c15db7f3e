// SPDX-License-Identifier: MIT
// Copyright (c) 2026 The qcomp developers

#ifndef QCOMP_STORE_HPP
#define QCOMP_STORE_HPP

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

namespace qcomp {

class StoreError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// One compilation outcome, keyed by everything that determined it.
struct StoreRow {
  std::string circuit_hash;
  std::string device_id;
  std::string fom_id;
  std::string catalog;
  std::string policy_hash;
  double score = 0.0;
  std::vector<std::string> pass_log;
};

/// Append-only newline-delimited JSON record file. Rows with a key already
/// present are skipped, which makes label generation resumable.
class ResultStore {
public:
  /// In-memory store when path is empty.
  explicit ResultStore(std::string path = {});

  using Key = std::tuple<std::string, std::string, std::string, std::string,
                         std::string>;
  static Key key_of(const StoreRow& row);

  bool has(const Key& key) const { return rows_.count(key) != 0; }
  const StoreRow* find(const Key& key) const;

  /// Returns false (and writes nothing) when the key already exists.
  bool append(const StoreRow& row);

  std::size_t size() const { return rows_.size(); }
  const std::map<Key, StoreRow>& rows() const { return rows_; }

private:
  std::string path_;
  std::map<Key, StoreRow> rows_;
};

} // namespace qcomp

#endif
