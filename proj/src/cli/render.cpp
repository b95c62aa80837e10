#include <algorithm>
#include <iomanip>
#include <sstream>

#include "covlab/cli/commands.hpp"

namespace covlab::cli {

namespace {

bool is_scalar(const Json& v) { return !v.is_array() && !v.is_object(); }

std::string scalar_text(const Json& v) {
    if (v.is_null()) return "";
    if (v.is_string()) return v.get<std::string>();
    return v.dump();
}

std::string csv_field(const Json& v) {
    std::string s = scalar_text(v);
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string quoted = "\"";
    for (char c : s) {
        if (c == '"') quoted += '"';
        quoted += c;
    }
    return quoted + "\"";
}

std::vector<std::string> scalar_keys(const Json& doc) {
    std::vector<std::string> keys;
    for (auto it = doc.begin(); it != doc.end(); ++it)
        if (is_scalar(it.value())) keys.push_back(it.key());
    return keys;
}

std::vector<std::string> row_keys(const Json& rows) {
    std::vector<std::string> keys;
    if (!rows.empty())
        for (auto it = rows.front().begin(); it != rows.front().end(); ++it) keys.push_back(it.key());
    return keys;
}

std::string render_csv(const Json& doc) {
    std::ostringstream out;
    const auto top = scalar_keys(doc);
    const bool has_rows = doc.contains("rows") && doc["rows"].is_array() && !doc["rows"].empty();
    const auto inner = has_rows ? row_keys(doc["rows"]) : std::vector<std::string>{};

    std::vector<std::string> header = top;
    header.insert(header.end(), inner.begin(), inner.end());
    for (std::size_t c = 0; c < header.size(); ++c) out << (c ? "," : "") << csv_field(header[c]);
    out << "\r\n";

    auto emit_prefix = [&] {
        for (std::size_t c = 0; c < top.size(); ++c) out << (c ? "," : "") << csv_field(doc[top[c]]);
    };
    if (!has_rows) {
        emit_prefix();
        out << "\r\n";
        return out.str();
    }
    for (const Json& row : doc["rows"]) {
        emit_prefix();
        for (std::size_t c = 0; c < inner.size(); ++c)
            out << ((c || !top.empty()) ? "," : "") << csv_field(row.value(inner[c], Json()));
        out << "\r\n";
    }
    return out.str();
}

std::string render_human(const CommandResult& r) {
    const Json& doc = r.doc;
    std::ostringstream out;
    out << "# covlab " << doc.value("command", std::string("?"));
    if (doc.contains("seed")) out << "  seed=" << doc["seed"].dump();
    out << '\n';

    const auto top = scalar_keys(doc);
    std::size_t width = 0;
    for (const auto& k : top) width = std::max(width, k.size());
    for (const auto& k : top) {
        if (k == "command" || k == "seed") continue;
        out << std::left << std::setw(static_cast<int>(width) + 2) << k << scalar_text(doc[k]) << '\n';
    }

    if (doc.contains("rows") && doc["rows"].is_array() && !doc["rows"].empty()) {
        const auto keys = row_keys(doc["rows"]);
        std::vector<std::size_t> widths(keys.size());
        for (std::size_t c = 0; c < keys.size(); ++c) {
            widths[c] = keys[c].size();
            for (const Json& row : doc["rows"])
                widths[c] = std::max(widths[c], scalar_text(row.value(keys[c], Json())).size());
        }
        out << '\n';
        for (std::size_t c = 0; c < keys.size(); ++c)
            out << std::left << std::setw(static_cast<int>(widths[c]) + 2) << keys[c];
        out << '\n';
        for (const Json& row : doc["rows"]) {
            for (std::size_t c = 0; c < keys.size(); ++c)
                out << std::left << std::setw(static_cast<int>(widths[c]) + 2)
                    << scalar_text(row.value(keys[c], Json()));
            out << '\n';
        }
    }
    if (!r.notes.empty()) out << '\n';
    for (const auto& note : r.notes) out << note << '\n';
    return out.str();
}

}  // namespace

std::string render(const CommandResult& result, OutputFormat format) {
    switch (format) {
        case OutputFormat::Json: return result.doc.dump(2) + "\n";
        case OutputFormat::Csv: return render_csv(result.doc);
        case OutputFormat::Human: return render_human(result);
    }
    return {};
}

}  // namespace covlab::cli
