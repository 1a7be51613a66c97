#include "dsp/bundle.hpp"

#include <fstream>
#include <sstream>

#include "dsp/format.hpp"

namespace dsp {

BundleError::BundleError(int line, const std::string& record_id, const std::string& field, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ", record '" + record_id + "', field '" + field + "': " + what),
      line_(line), record_id_(record_id), field_(field) {}

namespace {

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    for (;;) {
        const auto p = s.find(sep);
        out.push_back(s.substr(0, p));
        if (p == std::string_view::npos) break;
        s.remove_prefix(p + 1);
    }
    return out;
}

// Calls fn(line_number, fields) for every non-comment, non-blank line.
template <class Fn>
void for_each_record(std::string_view text, Fn&& fn) {
    int line_no = 0;
    for (auto line : split(text, '\n')) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty() || line.front() == '#') continue;
        fn(line_no, split(line, ','));
    }
}

double unit_field(int line, const std::string& id, std::string_view field, std::string_view text) {
    double v = 0.0;
    try {
        v = parse_double(text);
    } catch (const std::invalid_argument&) {
        throw BundleError(line, id, std::string(field), "not a number: '" + std::string(text) + "'");
    }
    if (!(v >= 0.0 && v <= 1.0)) throw BundleError(line, id, std::string(field), "value outside [0,1]");
    return v;
}

int id_field(int line, std::string_view text, const char* name) {
    try {
        return static_cast<int>(parse_integer(text));
    } catch (const std::invalid_argument&) {
        throw BundleError(line, std::string(text), name, "not an integer id");
    }
}

} // namespace

std::vector<NamedRule> parse_rule_bundle(std::string_view text) {
    std::vector<NamedRule> rules;
    for_each_record(text, [&](int line, const std::vector<std::string_view>& f) {
        const int id = id_field(line, f[0], "rule_id");
        const std::string sid = std::to_string(id);
        if (f.size() < 5) throw BundleError(line, sid, "alpha_o", "record too short");
        const std::size_t deltas = f.size() - 5;
        if (deltas != kRuleSize)
            throw BundleError(line, sid, "deltas",
                              "expected " + std::to_string(kRuleSize) + " deltas, found " + std::to_string(deltas));
        NamedRule r;
        r.id = id;
        r.rule.eta = unit_field(line, sid, "eta", f[1]);
        r.rule.theta = unit_field(line, sid, "theta", f[2]);
        r.rule.alpha_h = unit_field(line, sid, "alpha_h", f[3]);
        r.rule.alpha_o = unit_field(line, sid, "alpha_o", f[4]);
        for (std::size_t i = 0; i < kRuleSize; ++i) {
            const auto field = f[5 + i];
            const std::string name = "dw" + std::to_string(i + 1);
            if (field != "-1" && field != "0" && field != "1")
                throw BundleError(line, sid, name, "delta must be -1, 0 or 1, got '" + std::string(field) + "'");
            r.rule.delta[i] = static_cast<std::int8_t>(parse_integer(field));
        }
        for (const auto& existing : rules)
            if (existing.id == id) throw BundleError(line, sid, "rule_id", "duplicate rule id");
        rules.push_back(r);
    });
    return rules;
}

std::string serialize_rule_record(const NamedRule& r) {
    std::string s = std::to_string(r.id);
    for (double v : {r.rule.eta, r.rule.theta, r.rule.alpha_h, r.rule.alpha_o}) s += ',' + format_decimal(v);
    for (auto d : r.rule.delta) s += ',' + std::to_string(static_cast<int>(d));
    return s;
}

std::string serialize_rule_bundle(const std::vector<NamedRule>& rules) {
    std::string out(kRuleBundleHeader);
    out += '\n';
    for (const auto& r : rules) out += serialize_rule_record(r) + '\n';
    return out;
}

std::vector<NamedRule> load_rule_bundle(const std::string& path) { return parse_rule_bundle(read_text_file(path)); }

const DspRule& find_rule(const std::vector<NamedRule>& rules, int id) {
    for (const auto& r : rules)
        if (r.id == id) return r.rule;
    throw std::out_of_range("no rule with id " + std::to_string(id));
}

std::vector<NamedHcParams> parse_hc_bundle(std::string_view text) {
    std::vector<NamedHcParams> out;
    for_each_record(text, [&](int line, const std::vector<std::string_view>& f) {
        const int id = id_field(line, f[0], "params_id");
        const std::string sid = std::to_string(id);
        if (f.size() != 4)
            throw BundleError(line, sid, "fields", "expected 4 fields, found " + std::to_string(f.size()));
        NamedHcParams p;
        p.id = id;
        p.params.sigma = unit_field(line, sid, "sigma", f[1]);
        p.params.alpha_h = unit_field(line, sid, "alpha_h", f[2]);
        p.params.alpha_o = unit_field(line, sid, "alpha_o", f[3]);
        for (const auto& existing : out)
            if (existing.id == id) throw BundleError(line, sid, "params_id", "duplicate params id");
        out.push_back(p);
    });
    return out;
}

std::string serialize_hc_record(const NamedHcParams& p) {
    std::string s = std::to_string(p.id);
    for (double v : {p.params.sigma, p.params.alpha_h, p.params.alpha_o}) s += ',' + format_decimal(v);
    return s;
}

std::string serialize_hc_bundle(const std::vector<NamedHcParams>& params) {
    std::string out(kHcBundleHeader);
    out += '\n';
    for (const auto& p : params) out += serialize_hc_record(p) + '\n';
    return out;
}

std::vector<NamedHcParams> load_hc_bundle(const std::string& path) { return parse_hc_bundle(read_text_file(path)); }

const HcParams& find_hc_params(const std::vector<NamedHcParams>& params, int id) {
    for (const auto& p : params)
        if (p.id == id) return p.params;
    throw std::out_of_range("no HC parameter set with id " + std::to_string(id));
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_text_file(const std::string& path, std::string_view text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path);
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw std::runtime_error("write failed: " + path);
}

} // namespace dsp
