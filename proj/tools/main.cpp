#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "curverecon/run.hpp"

int main(int argc, char** argv) {
    CLI::App app{"surface reconstruction from boundary curvature data"};
    app.require_subcommand(0, 0);

    curverecon::RunOptions opt;
    app.add_option("mode", opt.mode,
                   "march | pc | pc-fixed-point | verify | converge | demo")
        ->required();
    app.add_option("-c,--config", opt.config_path, "JSON config file");
    app.add_option("-o,--out", opt.out_dir, "output directory");
    app.add_flag("-f,--force", opt.force, "overwrite existing results");
    app.add_option("-w,--workers", opt.workers, "worker threads for converge");
    app.add_option("-p,--preset", opt.preset, "demo preset name");

    CLI11_PARSE(app, argc, argv);
    return curverecon::run(opt, std::cout);
}
