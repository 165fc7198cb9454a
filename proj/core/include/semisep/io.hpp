#pragma once

// JSON schemas for instances, partitions and collections.
//
//   instance:   {"items":[{"name":"A","lower":1.0,"upper":100.0}, ...]}
//   partition:  {"bundles":[{"members":[0,1],"lower":2.0,"upper":4.0}, ...]}
//   collection: {"subsets":[{"members":[0],"lower":1.0,"upper":2.0}, ...]}
//
// Member indices are 0-based into "items". A partition or collection file may
// carry its own "items" array; otherwise the item count is taken from an
// explicit argument, an "item_count" field, or 1 + the largest member index.

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "semisep/model.hpp"

namespace semisep::io {

Instance parse_instance(std::string_view json_text);
std::string to_json(const Instance& instance);

PartitionSpec parse_partition(std::string_view json_text,
                              std::optional<std::size_t> item_count = std::nullopt);
std::string to_json(const PartitionSpec& partition);

CollectionSpec parse_collection(std::string_view json_text,
                                std::optional<std::size_t> item_count = std::nullopt);
std::string to_json(const CollectionSpec& collection);

/// Reads a whole file; throws Error(ParseError) if it cannot be opened.
std::string read_file(const std::filesystem::path& path);

}  // namespace semisep::io
