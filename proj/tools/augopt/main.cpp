#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"

namespace cli = augopt::cli;

namespace {

void add_data_opts(CLI::App* cmd, cli::DataOpts& data) {
    cmd->add_option("--format", data.format, "Input format: tsv or csv")
        ->capture_default_str();
    cmd->add_flag("--header", data.has_header,
                  "Skip the first row of each data file");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Compositional text augmentation with policy search"};
    app.set_version_flag("--version", cli::cli_version());
    app.require_subcommand(1);

    cli::SearchArgs search;
    auto* sc = app.add_subcommand(
        "search", "Search for the best augmentation policy on a dataset");
    sc->add_option("--config", search.config_path, "Search config (JSON)")
        ->required();
    sc->add_option("--data", search.data_path, "Labeled corpus")->required();
    sc->add_option("--out", search.out_dir, "Run directory")->required();
    sc->add_option("--thesaurus", search.thesaurus_path,
                   "Synonym table (default: $AUGOPT_THESAURUS)");
    add_data_opts(sc, search.data);
    sc->add_option("--sampler", search.sampler,
                   "Suggestion sampler: tpe or random")
        ->capture_default_str();
    sc->add_flag("--resume", search.resume,
                 "Continue an interrupted run from its trial log");
    sc->add_option("--repeats", search.repeats,
                   "Independent searches under derived seeds")
        ->capture_default_str();
    sc->add_option("--jobs", search.jobs, "Concurrent repeat limit")
        ->capture_default_str();
    sc->add_option("--iters", search.iterations, "Trials to run");
    sc->add_option("--regime", search.regime,
                   "low_resource, class_imbalanced, or full");
    sc->add_option("--train-size", search.train_size,
                   "Training examples to draw");
    sc->add_option("--val-size", search.val_size,
                   "Examples per validation set");
    sc->add_option("--n-aug", search.n_aug, "Variants per original");
    sc->add_option("--seed", search.seed, "Master seed");
    sc->add_option("--minority-class", search.minority_class,
                   "Minority class id (class_imbalanced)");
    sc->add_option("--minority-count", search.minority_count,
                   "Minority training examples (class_imbalanced)");
    sc->add_option("--majority-count", search.majority_count,
                   "Majority training examples (class_imbalanced)");

    cli::AugmentArgs augment;
    auto* ac = app.add_subcommand(
        "augment", "Apply a policy to a dataset and write the enlarged copy");
    ac->add_option("--data", augment.data_path, "Labeled corpus")->required();
    ac->add_option("--policy", augment.policy_path, "Policy (JSON)")
        ->required();
    ac->add_option("--out", augment.out_path, "Output dataset")->required();
    ac->add_option("--thesaurus", augment.thesaurus_path,
                   "Synonym table (default: $AUGOPT_THESAURUS)");
    add_data_opts(ac, augment.data);
    ac->add_option("--n-aug", augment.n_aug, "Variants per original")
        ->capture_default_str();
    ac->add_option("--n-select", augment.n_select, "Ops applied per variant")
        ->capture_default_str();
    ac->add_option("--seed", augment.seed, "Master seed")
        ->capture_default_str();
    ac->add_flag("--balance", augment.balance,
                 "Equalize a binary minority class instead of uniform n_aug");
    ac->add_option("--minority-class", augment.minority_class,
                   "Minority class id (with --balance)")
        ->capture_default_str();

    cli::EvaluateArgs evaluate;
    auto* ec = app.add_subcommand(
        "evaluate",
        "Train the surrogate classifier and report accuracy and text metrics");
    ec->add_option("--train", evaluate.train_path, "Training corpus")
        ->required();
    ec->add_option("--test", evaluate.test_path, "Held-out corpus")
        ->required();
    ec->add_option("--out", evaluate.out_path,
                   "Report file, or directory with --compare")
        ->required();
    ec->add_option("--val", evaluate.val_path,
                   "Checkpoint-selection corpus (default: the training set)");
    ec->add_option("--policy", evaluate.policy_path,
                   "Policy to augment the training set with");
    ec->add_option("--random-policy", evaluate.random_policy_path,
                   "Baseline policy for the comparison table");
    ec->add_option("--thesaurus", evaluate.thesaurus_path,
                   "Synonym table (default: $AUGOPT_THESAURUS)");
    add_data_opts(ec, evaluate.data);
    ec->add_option("--n-aug", evaluate.n_aug, "Variants per original")
        ->capture_default_str();
    ec->add_option("--n-select", evaluate.n_select, "Ops applied per variant")
        ->capture_default_str();
    ec->add_option("--seed", evaluate.seed, "Master seed")
        ->capture_default_str();
    ec->add_flag("--compare", evaluate.compare,
                 "Emit a per-condition comparison table instead");
    ec->add_option("--repeats", evaluate.repeats,
                   "Paired augmentation seeds with --compare")
        ->capture_default_str();
    ec->add_option("--epochs", evaluate.hp.epochs, "Training epochs")
        ->capture_default_str();
    ec->add_option("--lr", evaluate.hp.learning_rate, "Learning rate")
        ->capture_default_str();
    ec->add_option("--l2", evaluate.hp.l2_reg, "L2 penalty")
        ->capture_default_str();
    ec->add_option("--feature-dim", evaluate.hp.feature_dim,
                   "Hashed feature dimension (power of two)")
        ->capture_default_str();

    cli::ReportArgs report;
    auto* rc = app.add_subcommand(
        "report", "Turn trial logs into best-so-far CSV curves");
    rc->add_option("logs", report.log_paths, "Trial logs (JSONL)")
        ->required()
        ->expected(-1);
    rc->add_option("--out", report.out_path, "CSV file (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    auto run = [&](auto&& fn) {
        return cli::run_mapped([&] { fn(); }, std::cerr);
    };
    if (sc->parsed()) return run([&] { cli::cmd_search(search, std::cout); });
    if (ac->parsed()) return run([&] { cli::cmd_augment(augment, std::cout); });
    if (ec->parsed()) {
        return run([&] { cli::cmd_evaluate(evaluate, std::cout); });
    }
    return run([&] { cli::cmd_report(report, std::cout); });
}
