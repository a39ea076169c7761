#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "umet/records.hpp"

namespace umet {

// Splits one CSV line honoring double quotes ("" escapes a quote).
std::vector<std::string> split_csv_line(std::string_view line);
std::string csv_escape(std::string_view field);

// Predictions: CSV with header entity_id,timestamp,score[,class] or JSONL
// with the same keys (sniffed by a leading '{'). class values are pos/neg
// and mark pre-thresholded records. Throws InputError on malformed input
// or when a record carries neither score nor class.
std::vector<PredictionRecord> parse_predictions(std::string_view content);
std::vector<PredictionRecord> load_predictions(const std::filesystem::path& path);

// Events: CSV entity_id,timestamp[,event_id]. Missing ids are assigned
// sequentially per entity in timestamp order.
std::vector<EventRecord> parse_events(std::string_view content);
std::vector<EventRecord> load_events(const std::filesystem::path& path);

std::string read_file(const std::filesystem::path& path);   // InputError if unreadable
void write_file(const std::filesystem::path& path, std::string_view content);

// FNV-1a 64-bit content digest, as 16 hex chars.
std::string fnv1a_hex(std::string_view bytes);
std::string digest_file(const std::filesystem::path& path);

// Shortest decimal form of x that parses back to exactly x.
std::string format_double(double x);

}  // namespace umet
