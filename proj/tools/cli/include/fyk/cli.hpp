#pragma once

#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

namespace fyk::cli {

enum ExitCode : int {
    kOk = 0,
    kUsage = 1,
    kNumeric = 2,
    kToleranceBreach = 3,
};

using Cell = std::variant<long long, double, bool, std::string>;

// One output table. Bulk tables (grid dumps, full sweeps) go to stdout only
// when no output directory is given.
struct Table {
    Table() = default;
    Table(std::string name_, std::vector<std::string> columns_, bool bulk_ = false)
        : name(std::move(name_)), columns(std::move(columns_)), bulk(bulk_) {}

    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
    bool bulk = false;

    void add(std::vector<Cell> row);
    std::string slug() const;
};

// "# table: <name>", a header row, then the data; doubles use %.15g.
std::string to_csv(const Table& t);
std::string to_json(const std::string& command, const std::vector<Table>& tables, bool passed, int indent = 2);

// Entry point shared by the binary and the tests. args excludes argv[0].
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace fyk::cli
