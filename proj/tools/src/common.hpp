#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

namespace toposeg::cli {

// Insertion-ordered JSON so output key order is fixed by construction order,
// never by hashing. Required for byte-stable reruns.
using Json = nlohmann::ordered_json;

// All floating-point output goes through here: 9 significant digits, then
// reparsed so the JSON/CSV serializer prints exactly the rounded value.
std::string fmt9(double v);
double round9(double v);

// Every JSON document the tool emits carries the run manifest: re-running
// the tool with the recorded subcommand/inputs/config/seed reproduces the
// output byte-for-byte.
struct ManifestBuilder {
    std::string subcommand;
    std::vector<std::string> inputs;
    Json config = Json::object();
    std::uint64_t seed = 0;

    Json build() const;
};

void print_json(const Json& doc);
void write_text_file(const std::string& path, const std::string& text);
std::string read_text_file(const std::string& path);

} // namespace toposeg::cli
