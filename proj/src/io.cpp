#include "renormlab/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace renormlab::io {

namespace {

double get_number(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) throw InputError(std::string("missing field '") + key + "'");
    const json& v = j.at(key);
    if (!v.is_number()) throw InputError(std::string("field '") + key + "' is not a number");
    return v.get<double>();
}

std::vector<double> get_s_list(const json& j, const char* key) {
    if (!j.contains(key)) return {};
    const json& v = j.at(key);
    if (!v.is_array()) throw InputError(std::string("field '") + key + "' is not an array");
    std::vector<double> s;
    for (const json& e : v) {
        if (e.is_number()) s.push_back(e.get<double>());
        else if (e.is_object() && e.contains("s") && e.at("s").is_number()) s.push_back(e.at("s").get<double>());
        else throw InputError(std::string("entries of '") + key + "' must be numbers");
    }
    return s;
}

json s_list(const Decomposition& d) {
    json a = json::array();
    for (double s : d.s_values()) a.push_back(s);
    return a;
}

template <class F>
auto guarded(F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const InputError&) {
        throw;
    } catch (const std::exception& e) {
        throw InputError(e.what());
    }
}

int parse_int(const std::string& t) {
    int v = 0;
    auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc{} || p != t.data() + t.size() || v < 1) throw InputError("bad return time '" + t + "'");
    return v;
}

}  // namespace

json pure_to_json(const PureMap& m) { return {{"alpha", m.alpha()}, {"s", m.s()}}; }

PureMap pure_from_json(const json& j) {
    return guarded([&] { return PureMap(get_number(j, "alpha"), get_number(j, "s")); });
}

json decomposition_to_json(const Decomposition& d) {
    json pieces = json::array();
    for (double s : d.s_values()) pieces.push_back({{"s", s}});
    return {{"alpha", d.alpha()}, {"pieces", pieces}};
}

Decomposition decomposition_from_json(const json& j) {
    return guarded([&] { return Decomposition::from_s(get_number(j, "alpha"), get_s_list(j, "pieces")); });
}

json map_to_json(const LorenzMap& f) {
    return {{"alpha", f.alpha()}, {"u", f.u()}, {"v", f.v()}, {"c", f.c()},
            {"phi", s_list(f.phi_decomposition())}, {"psi", s_list(f.psi_decomposition())}};
}

LorenzMap map_from_json(const json& j) {
    return guarded([&] {
        double alpha = get_number(j, "alpha");
        return LorenzMap(alpha, get_number(j, "u"), get_number(j, "v"), get_number(j, "c"),
                         Decomposition::from_s(alpha, get_s_list(j, "phi")),
                         Decomposition::from_s(alpha, get_s_list(j, "psi")));
    });
}

json slice_to_json(const Slice& s) {
    return {{"alpha", s.alpha}, {"c", s.c}, {"phi", s_list(s.phi)}, {"psi", s_list(s.psi)}};
}

Slice slice_from_json(const json& j) {
    return guarded([&] {
        Slice s;
        s.alpha = get_number(j, "alpha");
        s.c = get_number(j, "c");
        if (!(s.alpha > 1.0)) throw InputError("alpha must exceed 1");
        if (!(s.c > 0.0 && s.c < 1.0)) throw InputError("c must lie in (0,1)");
        s.phi = Decomposition::from_s(s.alpha, get_s_list(j, "phi"));
        s.psi = Decomposition::from_s(s.alpha, get_s_list(j, "psi"));
        return s;
    });
}

json load_json(const std::string& arg) {
    std::string text;
    auto first = arg.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && (arg[first] == '{' || arg[first] == '[')) {
        text = arg;
    } else {
        std::ifstream in(arg);
        if (!in) throw InputError("cannot read '" + arg + "'");
        std::ostringstream ss;
        ss << in.rdbuf();
        text = ss.str();
    }
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw InputError(std::string("malformed JSON: ") + e.what());
    }
}

MonotoneType parse_type(const std::string& text) {
    auto comma = text.find(',');
    if (comma == std::string::npos) throw InputError("type must be 'a,b' or '01..1,10..0'");
    std::string x = text.substr(0, comma), y = text.substr(comma + 1);
    auto strip = [](std::string s) {
        std::string o;
        for (char ch : s)
            if (ch != ' ' && ch != '(' && ch != ')') o.push_back(ch);
        return o;
    };
    x = strip(x);
    y = strip(y);
    if (x.size() > 1 && x[0] == '0') {
        if (y.empty() || y[0] != '1' || x.find_first_not_of('1', 1) != std::string::npos ||
            y.find_first_not_of('0', 1) != std::string::npos || y.size() < 2)
            throw InputError("bad monotone word pair '" + text + "'");
        return {static_cast<int>(x.size() - 1), static_cast<int>(y.size() - 1)};
    }
    return {parse_int(x), parse_int(y)};
}

std::vector<MonotoneType> parse_types(const std::string& text) {
    std::vector<MonotoneType> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ';'))
        if (!item.empty()) out.push_back(parse_type(item));
    if (out.empty()) throw InputError("empty type list");
    return out;
}

std::vector<MonotoneType> parse_repeat(const std::string& text) {
    auto x = text.rfind('x');
    if (x == std::string::npos) throw InputError("repeat must be 'a,bxN'");
    MonotoneType t = parse_type(text.substr(0, x));
    int n = parse_int(text.substr(x + 1));
    return std::vector<MonotoneType>(n, t);
}

std::string type_word(MonotoneType t) {
    return "(0" + std::string(t.a, '1') + ",1" + std::string(t.b, '0') + ")";
}

std::string number(double x) {
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, x);
    if (ec != std::errc{}) return "nan";
    return std::string(buf, p);
}

}  // namespace renormlab::io
