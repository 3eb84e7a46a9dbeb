#ifndef MOG_CLI_HPP
#define MOG_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "mog/multiorder.hpp"
#include "mog/path_core.hpp"

#include <json.hpp>

namespace mog::cli {

enum ExitCode : int {
    kSuccess = 0,
    kAnalysisError = 1,
    kInputError = 2,
};

// Runs the `mog` command line. `args` excludes the program name. Normal
// output goes to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Report builders shared by the subcommands and the tests.
nlohmann::ordered_json detection_report(const OrderDetectionResult& result, const PathCollection& paths,
                                        const DirectedGraph& graph, std::size_t requested_max_order,
                                        LrStatistic statistic);
nlohmann::ordered_json baseline_report(const BaselineResult& result, std::size_t max_order,
                                       const std::string& stop_token);

} // namespace mog::cli

#endif
