#include "greenshop/csv.hpp"

namespace greenshop {

std::vector<std::string> split_csv_line(const std::string &line) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (char c : line) {
        if (c == '"') {
            quoted = !quoted;
        } else if (c == ',' && !quoted) {
            fields.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    fields.push_back(cur);
    for (auto &f : fields) {
        auto b = f.find_first_not_of(" \t");
        auto e = f.find_last_not_of(" \t");
        f = b == std::string::npos ? std::string() : f.substr(b, e - b + 1);
    }
    return fields;
}

std::string csv_field(const std::string &text) {
    std::string out;
    bool comma = false;
    for (char c : text) {
        if (c == '"') {
            out += '\'';
        } else if (c == '\n' || c == '\r') {
            out += ' ';
        } else {
            comma = comma || c == ',';
            out += c;
        }
    }
    return comma ? '"' + out + '"' : out;
}

} // namespace greenshop
