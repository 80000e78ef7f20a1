#include <doctest.h>
#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <sstream>
#include <sys/wait.h>

#include "hypercomp/composer.hpp"
#include "hypercomp/text.hpp"
#include "support/synthetic.hpp"
#include "support/test_support.hpp"

using hypercomp::testing::read_file;
using hypercomp::testing::write_file;

namespace {

struct Run {
    int code;
    std::string err;
};

class Workspace {
public:
    Workspace() : dir_("cli") {
        std::string corpus;
        for (const auto& l : hypercomp::synthetic::corpus(1)) corpus += l + "\n";
        write_file(f("corpus.txt"), corpus);
        write_file(f("data.tsv"), hypercomp::synthetic::dataset_tsv());
        write_file(f("vec.txt"), hypercomp::synthetic::dsm_text(1));
    }

    std::string f(const std::string& name) const { return dir_.file(name); }

    Run run(const std::string& args) const {
        const std::string err = f("stderr.txt");
        const std::string cmd = std::string("\"") + HYPERCOMP_CLI_PATH + "\" " + args + " 2> \"" + err + "\"";
        const int status = std::system(cmd.c_str());
        return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, read_file(err)};
    }

    void require_ok(const std::string& args) const {
        auto r = run(args);
        INFO(args << "\n" << r.err);
        REQUIRE(r.code == 0);
    }

    // extract -> rank -> build-list -> train, with small training settings.
    void prepare(const std::string& train_flags = "--dim 10 --epochs 60 --seed 7") const {
        require_ok("extract --corpus " + f("corpus.txt") + " -o " + f("occ.tsv"));
        require_ok("rank --pairs " + f("occ.tsv") + " -o " + f("ranked.tsv"));
        require_ok("build-list --ranked " + f("ranked.tsv") + " --dataset " + f("data.tsv") + " -o " + f("train.tsv"));
        require_ok("train --train-list " + f("train.tsv") + " " + train_flags + " -o " + f("poin.txt"));
    }

    std::string score_args(const std::string& poin, const std::string& extra = "") const {
        return "score --ranked " + f("ranked.tsv") + " --poincare " + poin + " --dsm " + f("vec.txt") +
               " --dataset " + f("data.tsv") + " " + extra;
    }

private:
    hypercomp::testing::TempDir dir_;
};

std::vector<hypercomp::compose::PredictionRow> predictions(const std::string& path) {
    std::istringstream in(read_file(path));
    return hypercomp::compose::read_predictions(in, path);
}

}  // namespace

TEST_CASE("cli: full pipeline") {
    Workspace w;
    w.prepare();
    CHECK(read_file(w.f("occ.tsv")).size() > 0);
    const auto poin = read_file(w.f("poin.txt"));
    CHECK(poin.substr(poin.find(' '), 4) == " 10\n");
    w.require_ok(w.score_args(w.f("poin.txt"), "-o " + w.f("pred.tsv")));
    auto rows = predictions(w.f("pred.tsv"));
    CHECK(rows.size() == 10);
    w.require_ok("evaluate --predictions " + w.f("pred.tsv") + " -o " + w.f("eval.tsv"));
    CHECK(read_file(w.f("eval.tsv")).rfind("n\trho\tabs_rho\n10\t", 0) == 0);
}

TEST_CASE("cli: subcommands are deterministic") {
    Workspace w;
    w.prepare();
    const auto occ = read_file(w.f("occ.tsv")), ranked = read_file(w.f("ranked.tsv")), poin = read_file(w.f("poin.txt"));
    w.prepare();
    CHECK(read_file(w.f("occ.tsv")) == occ);
    CHECK(read_file(w.f("ranked.tsv")) == ranked);
    CHECK(read_file(w.f("poin.txt")) == poin);
    w.prepare("--dim 10 --epochs 60 --seed 8");
    CHECK(read_file(w.f("poin.txt")) != poin);
}

TEST_CASE("cli: alpha 0 equals scoring against an uninformative Poincare file") {
    Workspace w;
    w.prepare();
    write_file(w.f("empty_poin.txt"), "2 2\nnothing 0.1 0.1\nelse 0 0.2\n");
    w.require_ok(w.score_args(w.f("poin.txt"), "--alpha 0 -o " + w.f("a0.tsv")));
    w.require_ok(w.score_args(w.f("empty_poin.txt"), "-o " + w.f("deg.tsv")));
    auto a = predictions(w.f("a0.tsv")), b = predictions(w.f("deg.tsv"));
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].phrase == b[i].phrase);
        CHECK(a[i].score == b[i].score);
        CHECK(b[i].source == hypercomp::compose::ScoreSource::FallbackDistributional);
    }

    w.require_ok(w.score_args(w.f("empty_poin.txt"), "--no-fallback -o " + w.f("reduced.tsv")));
    for (const auto& r : predictions(w.f("reduced.tsv"))) CHECK(std::isnan(r.score));
}

TEST_CASE("cli: evaluate and compare") {
    Workspace w;
    std::string gold_as_pred, noisy;
    int i = 0;
    for (const auto& c : hypercomp::synthetic::compounds()) {
        const std::string phrase = c.w1 + " " + c.w2, g = hypercomp::text::format_double(c.gold);
        gold_as_pred += phrase + "\t" + g + "\t" + g + "\tcombined\n";
        noisy += phrase + "\t" + g + "\t" + std::to_string((i++ * 7) % 10) + "\tcombined\n";
    }
    write_file(w.f("p1.tsv"), gold_as_pred);
    write_file(w.f("p2.tsv"), noisy);
    w.require_ok("evaluate --predictions " + w.f("p1.tsv") + " -o " + w.f("e.tsv"));
    CHECK(read_file(w.f("e.tsv")) == "n\trho\tabs_rho\n10\t1\t1\n");
    w.require_ok("evaluate --predictions " + w.f("p1.tsv") + " --compare " + w.f("p2.tsv") + " -o " + w.f("c.tsv"));
    const auto report = read_file(w.f("c.tsv"));
    CHECK(report.find("wilcoxon-exact\t") != std::string::npos);
    CHECK(report.find("\nz\t10\t") != std::string::npos);
}

TEST_CASE("cli: supervised and grid") {
    Workspace w;
    w.prepare();
    // A larger dataset for the split protocol: every compound repeated with jittered gold.
    std::string big;
    for (int rep = 0; rep < 4; ++rep)
        for (const auto& c : hypercomp::synthetic::compounds())
            big += c.w1 + " " + c.w2 + "\t" + hypercomp::text::format_double(c.gold * 0.9 + 0.1 * rep) + "\n";
    write_file(w.f("big.tsv"), big);
    const std::string sup = "supervised --dataset " + w.f("big.tsv") + " --dsm " + w.f("vec.txt") + " --poincare " +
                            w.f("poin.txt") + " --splits 4 --seed 3 --model pls --components 2";
    w.require_ok(sup + " -o " + w.f("s1.tsv"));
    w.require_ok(sup + " -o " + w.f("s2.tsv"));
    CHECK(read_file(w.f("s1.tsv")) == read_file(w.f("s2.tsv")));
    std::istringstream in(read_file(w.f("s1.tsv")));
    int lines = 0;
    for (std::string l; std::getline(in, l);) ++lines;
    CHECK(lines == 7);

    w.require_ok("grid --ranked " + w.f("ranked.tsv") + " --dsm " + w.f("vec.txt") + " --dataset " + w.f("data.tsv") +
                 " --k 5 --m 0,1,5,10 --alpha 0.2,0.4,0.6 --dim 5 --epochs 20 -o " + w.f("grid.tsv"));
    std::istringstream g(read_file(w.f("grid.tsv")));
    lines = 0;
    for (std::string l; std::getline(g, l);) ++lines;
    CHECK(lines == 13);
}

TEST_CASE("cli: errors are machine readable") {
    Workspace w;
    auto missing = w.run("rank --pairs " + w.f("nope.tsv"));
    CHECK(missing.code == 2);
    auto j = nlohmann::json::parse(missing.err);
    CHECK(j["error"] == "usage");

    auto bad_flag = w.run("train --bogus");
    CHECK(bad_flag.code == 2);

    write_file(w.f("broken.txt"), "2 3\na 0.1 0.1\n");
    write_file(w.f("list.tsv"), "a\tb\n");
    auto parse = w.run(w.score_args(w.f("broken.txt")).replace(0, 5, "score") + " --ranked " + w.f("list.tsv"));
    CHECK(parse.code != 0);

    write_file(w.f("ranked_bad.tsv"), "a\tb\tnotanumber\t1\n");
    auto bad = w.run("build-list --ranked " + w.f("ranked_bad.tsv") + " --dataset " + w.f("data.tsv"));
    CHECK(bad.code == 1);
    const auto line = bad.err.substr(bad.err.rfind('{'));
    auto e = nlohmann::json::parse(line);
    CHECK(e["error"] == "parse");
    CHECK(e["message"].get<std::string>().find("ranked_bad.tsv:1:") != std::string::npos);
}
