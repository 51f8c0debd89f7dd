#include "ivb/io.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace ivb {

namespace {

void dump_rec(const json& j, std::string& out, int indent, int depth) {
    auto pad = [&](int d) {
        if (indent >= 0) {
            out += '\n';
            out.append(static_cast<std::size_t>(indent) * d, ' ');
        }
    };
    switch (j.type()) {
        case json::value_t::object: {
            if (j.empty()) { out += "{}"; break; }
            out += '{';
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) out += ',';
                first = false;
                pad(depth + 1);
                out += json(it.key()).dump();
                out += indent >= 0 ? ": " : ":";
                dump_rec(it.value(), out, indent, depth + 1);
            }
            pad(depth);
            out += '}';
            break;
        }
        case json::value_t::array: {
            if (j.empty()) { out += "[]"; break; }
            out += '[';
            bool first = true;
            for (const auto& el : j) {
                if (!first) out += ',';
                first = false;
                pad(depth + 1);
                dump_rec(el, out, indent, depth + 1);
            }
            pad(depth);
            out += ']';
            break;
        }
        case json::value_t::number_float: {
            char buf[40];
            std::snprintf(buf, sizeof buf, "%.17g", j.get<double>());
            out += buf;
            break;
        }
        default:
            out += j.dump();
    }
}

}  // namespace

std::string dump_canonical(const json& j, int indent) {
    std::string out;
    dump_rec(j, out, indent, 0);
    return out;
}

std::string content_digest(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "fnv1a64:%016" PRIx64, h);
    return buf;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

CountTable counts_from_csv(const std::string& text) {
    CountTable table;
    std::istringstream in(text);
    std::string line;
    bool header_seen = false;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::istringstream fields(line);
        std::string z, x, y, n;
        if (!std::getline(fields, z, ',') || !std::getline(fields, x, ',') ||
            !std::getline(fields, y, ',') || !std::getline(fields, n))
            throw ParseError("line " + std::to_string(line_no) +
                             ": expected z,x,y,n");
        if (!header_seen) {
            header_seen = true;
            if (z == "z" && x == "x" && y == "y" && n == "n") continue;
            throw ParseError("first line must be the header z,x,y,n");
        }
        try {
            table.records.push_back({std::stoll(z), std::stoi(x),
                                     std::stoi(y), std::stoll(n)});
        } catch (const std::exception&) {
            throw ParseError("line " + std::to_string(line_no) +
                             ": non-numeric field");
        }
    }
    if (!header_seen) throw ParseError("empty count table");
    return table;
}

CountTable counts_from_json(const json& j) {
    if (!j.is_array()) throw ParseError("count table JSON must be an array");
    CountTable table;
    for (const auto& rec : j) {
        if (!rec.is_object())
            throw ParseError("count record must be an object");
        table.records.push_back({rec.at("z").get<long long>(),
                                 rec.at("x").get<int>(),
                                 rec.at("y").get<int>(),
                                 rec.at("n").get<long long>()});
    }
    return table;
}

std::string json_to_csv(const json& j) {
    json flat = j.flatten();
    std::string out = "key,value\n";
    for (auto it = flat.begin(); it != flat.end(); ++it) {
        out += json(it.key()).dump();
        out += ',';
        out += dump_canonical(it.value());
        out += '\n';
    }
    return out;
}

}  // namespace ivb
