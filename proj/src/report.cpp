#include "weilforge/report.hpp"

#include <algorithm>
#include <ostream>

#include <json.hpp>

namespace weilforge {

void Report::add(const std::string& space, const std::string& relation, bool ok,
                 const std::string& detail) {
    records.push_back({space, relation, ok, detail});
}

void Report::merge(const Report& other) {
    records.insert(records.end(), other.records.begin(), other.records.end());
}

bool Report::all_ok() const {
    return std::all_of(records.begin(), records.end(), [](const CheckRecord& r) { return r.ok; });
}

void Report::sort() {
    std::stable_sort(records.begin(), records.end(), [](const CheckRecord& a, const CheckRecord& b) {
        if (a.space != b.space) return a.space < b.space;
        return a.relation < b.relation;
    });
}

void Report::print_text(std::ostream& os) const {
    for (const auto& r : records) {
        os << "CHECK " << r.space << "." << r.relation << ": " << (r.ok ? "OK" : "FAIL");
        if (!r.counterexample.empty()) os << " detail=" << r.counterexample;
        os << "\n";
    }
}

void Report::print_structured(std::ostream& os) const {
    for (const auto& r : records) {
        nlohmann::json j;
        j["space"] = r.space;
        j["relation"] = r.relation;
        j["status"] = r.ok ? "OK" : "FAIL";
        j["counterexample"] = r.counterexample;
        os << j.dump() << "\n";
    }
}

} // namespace weilforge
