// CLI front end: discretize, train, evaluate, curves, predict.

#include <exception>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "gnb/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Generalized naive Bayes classifiers (GNB-A, GNB-O, NB, TAN)"};
    app.require_subcommand(1);

    gnb::RunConfig cfg;
    std::string model_path;

    auto add_input = [&](CLI::App* cmd, bool with_class) {
        cmd->add_option("--data", cfg.data_path, "input CSV (header row required)")
            ->required();
        if (with_class) {
            cmd->add_option("--class-col", cfg.class_column, "name of the class column")
                ->required();
            cmd->add_option("--join-classes", cfg.join_specs,
                            "relabel class values, e.g. \"1,2,3,4=1\" (repeatable)");
            cmd->add_option("--drop-cols", cfg.drop_cols, "columns to drop before training")
                ->delimiter(',');
        }
        cmd->add_option("--missing", cfg.missing,
                        "extra missing-value markers (defaults: empty, ?, NA)");
        cmd->add_option("--out", cfg.out_dir, "output directory (default: out)");
    };
    auto add_eval = [&](CLI::App* cmd) {
        cmd->add_option("--positive", cfg.positive_label, "label of the positive class")
            ->required();
        cmd->add_option("--test-frac", cfg.test_fraction, "test fraction (default 0.15)");
        cmd->add_option("--runs", cfg.runs, "number of seeded runs (default 5)");
        cmd->add_option("--seed", cfg.seed, "base seed; run r uses seed+r (default 0)");
    };

    CLI::App* train = app.add_subcommand("train", "learn a structure and fit a model");
    add_input(train, true);
    train->add_option("--algo", cfg.algo, "gnb-a | gnb-o | nb | tan (default gnb-a)");

    CLI::App* evaluate = app.add_subcommand("evaluate", "seeded train/test comparisons");
    add_input(evaluate, true);
    cfg.algo = "all";
    evaluate->add_option("--algo", cfg.algo,
                         "comma list of gnb-a,gnb-o,nb,tan or \"all\" (default all)");
    add_eval(evaluate);

    CLI::App* curves = app.add_subcommand("curves", "per-prefix metric curves");
    add_input(curves, true);
    curves->add_option("--algo", cfg.algo, "gnb-a | gnb-o");
    add_eval(curves);

    CLI::App* predict = app.add_subcommand("predict", "classify a CSV with a saved model");
    predict->add_option("--model", model_path, "model JSON from train")->required();
    add_input(predict, false);

    CLI::App* discretize = app.add_subcommand("discretize", "fit and apply quantile bins");
    add_input(discretize, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (train->parsed()) {
            if (cfg.algo == "all") cfg.algo = "gnb-a";
            return gnb::cmd_train(cfg);
        }
        if (evaluate->parsed()) return gnb::cmd_evaluate(cfg);
        if (curves->parsed()) {
            if (cfg.algo == "all") throw gnb::usage_error("curves expects --algo gnb-a or gnb-o");
            return gnb::cmd_curves(cfg);
        }
        if (predict->parsed()) return gnb::cmd_predict(model_path, cfg);
        if (discretize->parsed()) return gnb::cmd_discretize(cfg);
        return 1;
    } catch (const gnb::usage_error& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    } catch (const gnb::data_error& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    }
}
