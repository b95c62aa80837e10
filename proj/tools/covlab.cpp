#include <fstream>
#include <iostream>
#include <map>

#include <CLI11.hpp>

#include "covlab/cli/commands.hpp"
#include "covlab/errors.hpp"
#include "covlab/parallel.hpp"

using namespace covlab::cli;

namespace {

void add_common(CLI::App* sub, RunConfig& cfg, std::string& format) {
    sub->add_option("--seed", cfg.seed, "RNG seed");
    sub->add_option("--workers", cfg.workers, "worker threads (results do not depend on this)")
        ->check(CLI::PositiveNumber);
    sub->add_option("--format", format, "output format")
        ->check(CLI::IsMember({"json", "csv", "human"}));
    sub->add_option("--out", cfg.output_path, "write output to PATH instead of stdout");
}

}  // namespace

int main(int argc, char** argv) {
    RunConfig cfg;
    cfg.workers = covlab::default_workers();
    std::string format = "json";

    CLI::App app{"covlab: Wishart, total-variation and rank-detection experiments"};
    app.require_subcommand(1);

    auto* bound = app.add_subcommand("bound-table", "closed-form TV bound for all 1 <= n < d <= d_max");
    bound->add_option("--d-max", cfg.d_max, "largest dimension");
    add_common(bound, cfg, format);

    auto* tv = app.add_subcommand("tv", "TV chain between W_n(Id, d-1) and W_n(Id, d)");
    tv->add_option("--n", cfg.n)->required();
    tv->add_option("--d", cfg.d)->required();
    tv->add_option("--trials", cfg.trials);
    add_common(tv, cfg, format);

    auto* alpha = app.add_subcommand("alpha", "conditional second moments at a coordinate pair");
    alpha->add_option("matrix", cfg.matrix_path, "covariance matrix file")->required();
    alpha->add_option("--i", cfg.i, "first index (1-based)");
    alpha->add_option("--j", cfg.j, "second index (1-based)");
    alpha->add_option("--epsilon", cfg.epsilon, "slab half-width");
    alpha->add_option("--trials", cfg.trials);
    add_common(alpha, cfg, format);

    auto* moments = app.add_subcommand("moments", "determinant moments of W_n(Id, d)");
    moments->add_option("--n", cfg.n)->required();
    moments->add_option("--d", cfg.d, "degrees of freedom")->required();
    moments->add_option("--trials", cfg.trials);
    add_common(moments, cfg, format);

    auto* game = app.add_subcommand("game", "rank-detection game");
    game->add_option("--mode", cfg.mode)->check(CLI::IsMember({"two-way", "three-way", "fixed-theta"}));
    game->add_option("--n", cfg.n)->required();
    game->add_option("--d", cfg.d)->required();
    game->add_option("--k", cfg.k, "dimension of the removed subspace (two-way only, must be 1)");
    game->add_option("--detector", cfg.detector);
    game->add_option("--trials", cfg.trials);
    game->add_option("--thetas", cfg.thetas, "number of random directions (fixed-theta)");
    game->add_option("--theta", cfg.theta, "explicit direction (fixed-theta)")->delimiter(',');
    add_common(game, cfg, format);

    auto* section = app.add_subcommand("section", "covariance of the planar section and its rank");
    section->add_option("matrix", cfg.matrix_path, "covariance matrix file")->required();
    add_common(section, cfg, format);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    cfg.command = app.get_subcommands().front()->get_name();
    static const std::map<std::string, OutputFormat> formats{
        {"json", OutputFormat::Json}, {"csv", OutputFormat::Csv}, {"human", OutputFormat::Human}};
    cfg.format = formats.at(format);

    try {
        if (cfg.command == "game" && cfg.k != 1)
            throw covlab::InvalidParams("game: only --k 1 is supported");
        const CommandResult result = run_command(cfg);
        const std::string text = render(result, cfg.format);
        if (cfg.output_path) {
            std::ofstream out(*cfg.output_path, std::ios::binary);
            if (!out) throw covlab::InvalidParams("cannot write '" + *cfg.output_path + "'");
            out << text;
        } else {
            std::cout << text;
        }
        return result.exit_code;
    } catch (const covlab::Error& e) {
        std::cerr << "covlab: " << e.what() << '\n';
        return kExitUsage;
    }
}
