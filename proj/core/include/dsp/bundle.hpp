#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "dsp/hillclimb.hpp"
#include "dsp/plasticity.hpp"

namespace dsp {

// Rule bundle: one CSV record per rule,
//   rule_id,eta,theta,alpha_h,alpha_o,dw1,...,dw32
// with the deltas in rule-table row order. Lines starting with '#' are
// comments. Continuous values are written with at least four decimals, so
// parse -> serialize reproduces a file written by serialize byte for byte.
//
// HC parameter bundle: params_id,sigma,alpha_h,alpha_o, same conventions.

inline constexpr std::string_view kRuleBundleHeader = "# rule_id,eta,theta,alpha_h,alpha_o,dw1..dw32";
inline constexpr std::string_view kHcBundleHeader = "# params_id,sigma,alpha_h,alpha_o";

class BundleError : public std::runtime_error {
public:
    BundleError(int line, const std::string& record_id, const std::string& field, const std::string& what);
    [[nodiscard]] int line() const noexcept { return line_; }
    [[nodiscard]] const std::string& record_id() const noexcept { return record_id_; }
    [[nodiscard]] const std::string& field() const noexcept { return field_; }

private:
    int line_;
    std::string record_id_;
    std::string field_;
};

struct NamedRule {
    int id = 0;
    DspRule rule;
    friend bool operator==(const NamedRule&, const NamedRule&) = default;
};

struct NamedHcParams {
    int id = 0;
    HcParams params;
    friend bool operator==(const NamedHcParams&, const NamedHcParams&) = default;
};

[[nodiscard]] std::vector<NamedRule> parse_rule_bundle(std::string_view text);
[[nodiscard]] std::string serialize_rule_bundle(const std::vector<NamedRule>& rules);
[[nodiscard]] std::string serialize_rule_record(const NamedRule& rule);
[[nodiscard]] std::vector<NamedRule> load_rule_bundle(const std::string& path);
/// Throws std::out_of_range when no record has the id.
[[nodiscard]] const DspRule& find_rule(const std::vector<NamedRule>& rules, int id);

[[nodiscard]] std::vector<NamedHcParams> parse_hc_bundle(std::string_view text);
[[nodiscard]] std::string serialize_hc_record(const NamedHcParams& params);
[[nodiscard]] std::string serialize_hc_bundle(const std::vector<NamedHcParams>& params);
[[nodiscard]] std::vector<NamedHcParams> load_hc_bundle(const std::string& path);
[[nodiscard]] const HcParams& find_hc_params(const std::vector<NamedHcParams>& params, int id);

[[nodiscard]] std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view text);

} // namespace dsp
