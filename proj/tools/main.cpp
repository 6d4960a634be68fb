// lipsing: batch front-end for the link and smoothness analyses.

#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "commands.hpp"

namespace {

std::vector<double> parse_scales(const std::string& text)
{
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        const double v = std::stod(item, &used);
        if (used != item.size())
            throw std::invalid_argument(item);
        out.push_back(v);
    }
    return out;
}

}   // namespace

int main(int argc, char** argv)
{
    using namespace lipsing;
    CLI::App app{"Metric-topological evidence for smoothness of polynomial zero sets"};
    app.require_subcommand(1);

    cli::RunConfig config;
    std::string scales, ring = "z2";
    for (const std::string& name : cli::commands()) {
        CLI::App* sub = app.add_subcommand(name);
        if (name == "report") {
            sub->add_option("--out", config.out, "Directory holding the reports")->required();
            continue;
        }
        sub->add_option("--variety", config.variety, "Variety or generator file")->required();
        sub->add_option("--seed", config.seed, "Random seed")->required();
        sub->add_option("--scales", scales, "Comma-separated scales t");
        sub->add_option("--count", config.count, "Sample points per scale")->check(CLI::PositiveNumber);
        sub->add_option("--ring", ring, "Homology coefficients")->check(CLI::IsMember({"z2", "z"}));
        sub->add_option("--max-dim", config.max_dim, "Top homology dimension")->check(CLI::NonNegativeNumber);
        sub->add_option("--dim-k", config.dim_k, "Dimension of X")->check(CLI::PositiveNumber);
        sub->add_option("--out", config.out, "Output directory");
        sub->add_option("--trials", config.trials, "Randomized transfer trials");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? cli::kCompleted : cli::kInvalidInput;
    }
    config.command = app.get_subcommands().front()->get_name();
    config.ring = ring == "z" ? Ring::Z : Ring::Z2;
    if (!scales.empty()) {
        try {
            config.scales = parse_scales(scales);
        } catch (const std::exception&) {
            std::cerr << "error: --scales must be a comma-separated list of numbers\n";
            return cli::kInvalidInput;
        }
        if (config.scales.empty()) {
            std::cerr << "error: --scales is empty\n";
            return cli::kInvalidInput;
        }
    }

    const cli::RunResult result = cli::run(config);
    if (result.exit_code == cli::kInvalidInput)
        std::cerr << "error: " << result.message << "\n";
    else
        std::cout << result.message << "\n";
    for (const std::string& f : result.files)
        std::cout << "  wrote " << f << "\n";
    return result.exit_code;
}
