#include "umet/io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "umet/errors.hpp"

namespace umet {

std::vector<std::string> split_csv_line(std::string_view line) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    fields.push_back(std::move(cur));
    return fields;
}

std::string csv_escape(std::string_view field) {
    if (field.find_first_of(",\"\n") == std::string_view::npos) return std::string(field);
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

namespace {

std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

double parse_score(const std::string& text, std::size_t line_no) {
    char* end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (end != text.c_str() + text.size())
        throw InputError("line " + std::to_string(line_no) + ": unparseable score '" + text + "'");
    return v;
}

Class parse_class(const std::string& text, std::size_t line_no) {
    if (text == "pos" || text == "positive" || text == "1" || text == "true") return Class::positive;
    if (text == "neg" || text == "negative" || text == "0" || text == "false") return Class::negative;
    throw InputError("line " + std::to_string(line_no) + ": unparseable class '" + text + "'");
}

// Column lookup by header name; -1 when absent.
struct Header {
    int entity = -1, timestamp = -1, score = -1, cls = -1, event = -1;
};

Header parse_header(const std::vector<std::string>& fields, std::size_t line_no) {
    Header h;
    for (int i = 0; i < static_cast<int>(fields.size()); ++i) {
        const std::string name = trim(fields[static_cast<std::size_t>(i)]);
        if (name == "entity_id") h.entity = i;
        else if (name == "timestamp") h.timestamp = i;
        else if (name == "score") h.score = i;
        else if (name == "class") h.cls = i;
        else if (name == "event_id") h.event = i;
        else throw InputError("line " + std::to_string(line_no) + ": unknown column '" + name + "'");
    }
    if (h.entity < 0 || h.timestamp < 0)
        throw InputError("header must name entity_id and timestamp columns");
    return h;
}

bool looks_like_jsonl(std::string_view content) {
    for (char c : content) {
        if (std::isspace(static_cast<unsigned char>(c))) continue;
        return c == '{';
    }
    return false;
}

std::vector<std::string_view> lines_of(std::string_view content) {
    std::vector<std::string_view> lines;
    std::size_t start = 0;
    while (start <= content.size()) {
        std::size_t nl = content.find('\n', start);
        if (nl == std::string_view::npos) nl = content.size();
        std::string_view line = content.substr(start, nl - start);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        lines.push_back(line);
        if (nl == content.size()) break;
        start = nl + 1;
    }
    while (!lines.empty() && lines.back().empty()) lines.pop_back();
    return lines;
}

std::vector<PredictionRecord> parse_predictions_jsonl(std::string_view content) {
    std::vector<PredictionRecord> out;
    std::size_t line_no = 0;
    for (std::string_view line : lines_of(content)) {
        ++line_no;
        if (trim(line).empty()) continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw InputError("line " + std::to_string(line_no) + ": bad JSON: " + e.what());
        }
        PredictionRecord r;
        if (!j.contains("entity_id") || !j.contains("timestamp"))
            throw InputError("line " + std::to_string(line_no) + ": entity_id and timestamp required");
        r.entity_id = j.at("entity_id").get<std::string>();
        if (j.at("timestamp").is_number())
            r.timestamp = Instant{std::llround(j.at("timestamp").get<double>() * 1000.0)};
        else
            r.timestamp = parse_instant(j.at("timestamp").get<std::string>());
        if (j.contains("score")) r.score = j.at("score").get<double>();
        if (j.contains("class")) r.label = parse_class(j.at("class").get<std::string>(), line_no);
        if (!r.score && !r.label)
            throw InputError("line " + std::to_string(line_no) + ": record needs score or class");
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace

std::vector<PredictionRecord> parse_predictions(std::string_view content) {
    if (looks_like_jsonl(content)) return parse_predictions_jsonl(content);

    const auto lines = lines_of(content);
    if (lines.empty()) throw InputError("empty predictions input");
    const Header h = parse_header(split_csv_line(lines[0]), 1);
    if (h.score < 0 && h.cls < 0)
        throw InputError("predictions header needs a score or class column");

    std::vector<PredictionRecord> out;
    out.reserve(lines.size() - 1);
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (trim(lines[i]).empty()) continue;
        const auto fields = split_csv_line(lines[i]);
        const std::size_t line_no = i + 1;
        const auto need = static_cast<std::size_t>(std::max({h.entity, h.timestamp, -1})) + 1;
        if (fields.size() < need)
            throw InputError("line " + std::to_string(line_no) + ": too few columns");
        PredictionRecord r;
        r.entity_id = trim(fields[static_cast<std::size_t>(h.entity)]);
        r.timestamp = parse_instant(trim(fields[static_cast<std::size_t>(h.timestamp)]));
        if (h.score >= 0 && static_cast<std::size_t>(h.score) < fields.size()) {
            const std::string s = trim(fields[static_cast<std::size_t>(h.score)]);
            if (!s.empty()) r.score = parse_score(s, line_no);
        }
        if (h.cls >= 0 && static_cast<std::size_t>(h.cls) < fields.size()) {
            const std::string s = trim(fields[static_cast<std::size_t>(h.cls)]);
            if (!s.empty()) r.label = parse_class(s, line_no);
        }
        if (!r.score && !r.label)
            throw InputError("line " + std::to_string(line_no) + ": record needs score or class");
        out.push_back(std::move(r));
    }
    if (out.empty()) throw InputError("predictions input has no records");
    return out;
}

std::vector<EventRecord> parse_events(std::string_view content) {
    const auto lines = lines_of(content);
    std::vector<EventRecord> out;
    if (lines.empty()) return out;
    const Header h = parse_header(split_csv_line(lines[0]), 1);
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (trim(lines[i]).empty()) continue;
        const auto fields = split_csv_line(lines[i]);
        EventRecord r;
        r.entity_id = trim(fields[static_cast<std::size_t>(h.entity)]);
        r.timestamp = parse_instant(trim(fields[static_cast<std::size_t>(h.timestamp)]));
        if (h.event >= 0 && static_cast<std::size_t>(h.event) < fields.size())
            r.event_id = trim(fields[static_cast<std::size_t>(h.event)]);
        out.push_back(std::move(r));
    }
    return out;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write " + path.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
}

std::vector<PredictionRecord> load_predictions(const std::filesystem::path& path) {
    return parse_predictions(read_file(path));
}

std::vector<EventRecord> load_events(const std::filesystem::path& path) {
    return parse_events(read_file(path));
}

std::string fnv1a_hex(std::string_view bytes) {
    std::uint64_t hash = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        hash ^= c;
        hash *= 0x100000001b3ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
    return buf;
}

std::string digest_file(const std::filesystem::path& path) { return fnv1a_hex(read_file(path)); }

std::string format_double(double x) {
    char buf[32];
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof(buf), "%.*g", prec, x);
        if (std::strtod(buf, nullptr) == x) break;
    }
    return buf;
}

}  // namespace umet
