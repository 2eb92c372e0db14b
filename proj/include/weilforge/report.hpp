#ifndef WEILFORGE_REPORT_HPP
#define WEILFORGE_REPORT_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace weilforge {

// One line per check:  CHECK <space>.<relation>: OK|FAIL detail=<...>
struct CheckRecord {
    std::string space;
    std::string relation;
    bool ok = true;
    std::string counterexample; // first counterexample, or extra detail for OK lines
};

struct Report {
    std::vector<CheckRecord> records;

    void add(const std::string& space, const std::string& relation, bool ok,
             const std::string& detail = "");
    void merge(const Report& other);
    bool all_ok() const;
    // canonical ordering (sorted by check id) regardless of generation order
    void sort();
    void print_text(std::ostream& os) const;
    void print_structured(std::ostream& os) const; // line-delimited JSON records
};

} // namespace weilforge

#endif
