#include "semisep/io.hpp"

#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "semisep/error.hpp"

namespace semisep::io {

using nlohmann::ordered_json;

namespace {

ordered_json parse(std::string_view text) {
  try {
    return ordered_json::parse(text);
  } catch (const ordered_json::exception& e) {
    throw Error(Errc::ParseError, e.what());
  }
}

double number(const ordered_json& obj, const char* key) {
  if (!obj.contains(key) || !obj.at(key).is_number()) {
    throw Error(Errc::ParseError, std::string("missing numeric field '") + key + "'");
  }
  return obj.at(key).get<double>();
}

std::vector<Bundle> parse_bundles(const ordered_json& doc, const char* key) {
  if (!doc.is_object() || !doc.contains(key) || !doc.at(key).is_array()) {
    throw Error(Errc::ParseError, std::string("expected an object with a '") + key + "' array");
  }
  std::vector<Bundle> out;
  for (const auto& entry : doc.at(key)) {
    if (!entry.is_object() || !entry.contains("members") || !entry.at("members").is_array()) {
      throw Error(Errc::ParseError, "each bundle needs a 'members' array");
    }
    Bundle b;
    for (const auto& m : entry.at("members")) {
      if (!m.is_number_integer() || m.get<long long>() < 0) {
        throw Error(Errc::ParseError, "member indices must be non-negative integers");
      }
      b.members.push_back(m.get<std::size_t>());
    }
    b.lower = number(entry, "lower");
    b.upper = number(entry, "upper");
    out.push_back(std::move(b));
  }
  return out;
}

std::size_t resolve_item_count(const ordered_json& doc, const std::vector<Bundle>& bundles,
                               std::optional<std::size_t> explicit_count) {
  if (explicit_count) return *explicit_count;
  if (doc.contains("items") && doc.at("items").is_array()) return doc.at("items").size();
  if (doc.contains("item_count") && doc.at("item_count").is_number_unsigned()) {
    return doc.at("item_count").get<std::size_t>();
  }
  std::size_t n = 0;
  for (const auto& b : bundles) {
    for (std::size_t m : b.members) n = std::max(n, m + 1);
  }
  return n;
}

ordered_json bundles_json(const std::vector<Bundle>& bundles) {
  ordered_json arr = ordered_json::array();
  for (const auto& b : bundles) {
    arr.push_back({{"members", b.members}, {"lower", b.lower}, {"upper", b.upper}});
  }
  return arr;
}

}  // namespace

Instance parse_instance(std::string_view json_text) {
  const auto doc = parse(json_text);
  if (!doc.is_object() || !doc.contains("items") || !doc.at("items").is_array()) {
    throw Error(Errc::ParseError, "expected an object with an 'items' array");
  }
  std::vector<Item> items;
  for (const auto& entry : doc.at("items")) {
    if (!entry.is_object()) throw Error(Errc::ParseError, "each item must be an object");
    Item it;
    if (entry.contains("name")) {
      if (!entry.at("name").is_string()) throw Error(Errc::ParseError, "item name must be a string");
      it.name = entry.at("name").get<std::string>();
    }
    it.lower = number(entry, "lower");
    it.upper = number(entry, "upper");
    items.push_back(std::move(it));
  }
  return Instance::validate(std::move(items));
}

std::string to_json(const Instance& instance) {
  ordered_json items = ordered_json::array();
  for (const auto& it : instance.items()) {
    items.push_back({{"name", it.name}, {"lower", it.lower}, {"upper", it.upper}});
  }
  return ordered_json{{"items", items}}.dump();
}

PartitionSpec parse_partition(std::string_view json_text, std::optional<std::size_t> item_count) {
  const auto doc = parse(json_text);
  auto bundles = parse_bundles(doc, "bundles");
  const auto n = resolve_item_count(doc, bundles, item_count);
  return PartitionSpec::validate(n, std::move(bundles));
}

std::string to_json(const PartitionSpec& partition) {
  return ordered_json{{"item_count", partition.item_count},
                      {"bundles", bundles_json(partition.bundles)}}
      .dump();
}

CollectionSpec parse_collection(std::string_view json_text,
                                std::optional<std::size_t> item_count) {
  const auto doc = parse(json_text);
  auto subsets = parse_bundles(doc, "subsets");
  const auto n = resolve_item_count(doc, subsets, item_count);
  return CollectionSpec::validate(n, std::move(subsets));
}

std::string to_json(const CollectionSpec& collection) {
  return ordered_json{{"item_count", collection.item_count},
                      {"subsets", bundles_json(collection.subsets)}}
      .dump();
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::ParseError, "cannot open '" + path.string() + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace semisep::io
