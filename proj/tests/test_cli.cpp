#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "support.hpp"
#include "synthfm/config.hpp"
#include "synthfm/png_io.hpp"

using namespace synthfm;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Run {
    int code = -1;
    std::string out; ///< stdout and stderr interleaved
};

Run run(const std::string& args)
{
    const std::string cmd = std::string("'") + SYNTHFM_CLI_PATH + "' " + args + " 2>&1";
    Run r;
    FILE* pipe = ::popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    char buf[4096];
    std::size_t n = 0;
    while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0)
        r.out.append(buf, n);
    const int status = ::pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string q(const fs::path& p)
{
    return "'" + p.string() + "'";
}

// Small, fast config file for end-to-end runs.
fs::path small_config_file(const fs::path& dir, std::uint64_t epoch = 10000)
{
    GenConfig cfg;
    cfg.image_width = 96;
    cfg.image_height = 80;
    cfg.epoch_size = epoch;
    const fs::path p = dir / "config.json";
    std::ofstream(p) << to_json(cfg).dump(2);
    return p;
}

std::size_t count_suffix(const fs::path& dir, const std::string& suffix)
{
    std::size_t n = 0;
    for (const auto& e : fs::directory_iterator(dir)) {
        const std::string name = e.path().filename().string();
        n += name.size() >= suffix.size() && name.compare(name.size() - suffix.size(), suffix.size(), suffix) == 0;
    }
    return n;
}

std::vector<std::string> lines(const std::string& text)
{
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string l; std::getline(in, l);)
        if (!l.empty())
            out.push_back(l);
    return out;
}

std::string read_bytes(const fs::path& p)
{
    std::ifstream f(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(f), {}};
}

void write_masks(const fs::path& dir, const std::vector<BinaryMask>& masks)
{
    fs::create_directories(dir);
    for (std::size_t i = 0; i < masks.size(); ++i)
        write_mask_png(dir / ("case" + std::to_string(i) + ".png"), masks[i]);
}

} // namespace

TEST_SUITE("cli")
{
    TEST_CASE("usage errors exit 1, help exits 0 and documents every flag")
    {
        CHECK(run("").code == 1);
        CHECK(run("frobnicate").code == 1);
        CHECK(run("--help").code == 0);
        const std::vector<std::pair<std::string, std::vector<std::string>>> cmds{
            {"gen", {"--config", "--seed", "--start", "--count", "--out", "--threads", "--split"}},
            {"preview", {"--config", "--seed", "--count", "--tile", "--out"}},
            {"prompts", {"--mask", "--npos", "--nneg", "--seed", "--dilation"}},
            {"eval", {"--pred", "--gt", "--paired-against", "--tails"}},
            {"serve", {"--config", "--seed", "--bind"}},
            {"bench", {"--config", "--seed", "--count", "--threads", "--json"}},
            {"validate-config", {"--config"}},
        };
        for (const auto& [cmd, flags] : cmds) {
            const Run r = run(cmd + " --help");
            CHECK(r.code == 0);
            for (const auto& f : flags) {
                const auto at = r.out.find("  " + f + " ");
                REQUIRE_MESSAGE(at != std::string::npos, cmd << " " << f);
                const std::string line = r.out.substr(at, r.out.find('\n', at) - at);
                // Flag, type/default column, then a description.
                CHECK_MESSAGE(line.find_last_not_of(' ') > 40, line);
            }
        }
        CHECK(run("gen").code == 1); // --out is required
    }

    TEST_CASE("gen writes the requested samples")
    {
        const fs::path dir = testing::scratch_dir("cli_gen");
        const fs::path cfg = small_config_file(dir);
        const Run r = run("gen --config " + q(cfg) + " --count 10 --out " + q(dir / "out"));
        REQUIRE_MESSAGE(r.code == 0, r.out);
        CHECK(r.out.find("manifest.json") != std::string::npos);
        CHECK(r.out.find("samples/s") != std::string::npos);
        CHECK(count_suffix(dir / "out", ".img.png") == 10);
        CHECK(count_suffix(dir / "out", ".meta.json") == 10);
        CHECK(count_suffix(dir / "out", ".png") > 10);
        std::ifstream m(dir / "out" / "manifest.json");
        CHECK(json::parse(m).at("sample_count") == 10);

        // A second run with the same seed reproduces every byte.
        const Run again = run("gen --config " + q(cfg) + " --count 10 --threads 2 --out " + q(dir / "out2"));
        REQUIRE(again.code == 0);
        for (const auto& e : fs::directory_iterator(dir / "out"))
            CHECK(read_bytes(e.path()) == read_bytes(dir / "out2" / e.path().filename()));
    }

    TEST_CASE("gen defaults to one epoch")
    {
        const fs::path dir = testing::scratch_dir("cli_epoch");
        const fs::path cfg = small_config_file(dir, 4);
        REQUIRE(run("gen --config " + q(cfg) + " --out " + q(dir / "out")).code == 0);
        CHECK(count_suffix(dir / "out", ".img.png") == 4);
    }

    TEST_CASE("gen runtime errors exit 2")
    {
        const fs::path dir = testing::scratch_dir("cli_gen_err");
        const fs::path cfg = small_config_file(dir);
        CHECK(run("gen --config " + q(cfg) + " --count 1 --out /proc/synthfm_nope").code == 2);

        GenConfig broken;
        broken.image_width = broken.image_height = 64;
        broken.module_mix = 1.0;
        broken.boundary.carve.iterations = {0, 0};
        std::ofstream(dir / "broken.json") << to_json(broken).dump();
        const Run r = run("gen --config " + q(dir / "broken.json") + " --start 3 --count 1 --out " + q(dir / "b"));
        CHECK(r.code == 2);
        CHECK(r.out.find("sample 3") != std::string::npos);
    }

    TEST_CASE("preview renders a deterministic gallery")
    {
        const fs::path dir = testing::scratch_dir("cli_preview");
        const fs::path cfg = small_config_file(dir);
        const std::string args = "preview --config " + q(cfg) + " --seed 5 --count 8 --tile 64 --out ";
        REQUIRE(run(args + q(dir / "a.png")).code == 0);
        REQUIRE(run(args + q(dir / "b.png")).code == 0);
        CHECK(read_bytes(dir / "a.png") == read_bytes(dir / "b.png"));
        const GrayPng g = read_png_gray(dir / "a.png");
        // 8 tiles on a 3x3 grid with 4-pixel gaps.
        CHECK(g.width == 3 * 64 + 4 * 4);
        CHECK(g.height == 3 * 64 + 4 * 4);
        CHECK(run(args + q(dir / "c.png") + " --count 100").code == 1);
        const Run other = run("preview --config " + q(cfg) + " --seed 6 --count 8 --tile 64 --out " + q(dir / "d.png"));
        REQUIRE(other.code == 0);
        CHECK(read_bytes(dir / "a.png") != read_bytes(dir / "d.png"));
    }

    TEST_CASE("prompts prints JSON lines")
    {
        const fs::path dir = testing::scratch_dir("cli_prompts");
        BinaryMask disk(64, 64);
        for (int y = 0; y < 64; ++y)
            for (int x = 0; x < 64; ++x)
                disk(x, y) = (x - 30) * (x - 30) + (y - 33) * (y - 33) <= 144;
        write_mask_png(dir / "disk.png", disk);
        Run r = run("prompts --mask " + q(dir / "disk.png") + " --npos 1 --nneg 0");
        REQUIRE(r.code == 0);
        auto ls = lines(r.out);
        REQUIRE(ls.size() == 1);
        CHECK(json::parse(ls[0]) == json{{"role", "positive"}, {"x", 30}, {"y", 33}});

        r = run("prompts --mask " + q(dir / "disk.png") + " --npos 3 --nneg 2 --seed 4 --dilation 3");
        REQUIRE(r.code == 0);
        ls = lines(r.out);
        REQUIRE(ls.size() == 5);
        int neg = 0;
        for (const auto& l : ls) {
            const json j = json::parse(l);
            const int x = j.at("x"), y = j.at("y");
            if (j.at("role") == "negative") {
                ++neg;
                CHECK_FALSE(disk(x, y));
            } else {
                CHECK(disk(x, y));
            }
        }
        CHECK(neg == 2);
        CHECK(run("prompts --mask " + q(dir / "disk.png") + " --npos 3 --nneg 2 --seed 4 --dilation 3").out == r.out);

        write_mask_png(dir / "empty.png", BinaryMask(16, 16));
        CHECK(run("prompts --mask " + q(dir / "empty.png")).code == 2);
        CHECK(run("prompts --mask " + q(dir / "missing.png")).code == 2);
    }

    TEST_CASE("eval computes Dice and the paired t-test")
    {
        const fs::path dir = testing::scratch_dir("cli_eval");
        std::mt19937_64 gen(3);
        std::vector<BinaryMask> gt, comp;
        for (int i = 0; i < 5; ++i) {
            BinaryMask m = testing::random_mask(gen, 20, 20, 0.4);
            m(0, 0) = 1;
            m(1, 0) = 0;
            BinaryMask c = m;
            for (auto& v : c.pixels())
                v = !v;
            gt.push_back(m);
            comp.push_back(c);
        }
        write_masks(dir / "gt", gt);
        write_masks(dir / "same", gt);
        write_masks(dir / "same2", gt);
        write_masks(dir / "comp", comp);

        Run r = run("eval --pred " + q(dir / "same") + " --gt " + q(dir / "gt"));
        REQUIRE(r.code == 0);
        CHECK(r.out.find("DSC mean 1 +/- 0 (n=5)") != std::string::npos);

        r = run("eval --pred " + q(dir / "comp") + " --gt " + q(dir / "gt"));
        REQUIRE(r.code == 0);
        CHECK(r.out.find("DSC mean 0 +/- 0 (n=5)") != std::string::npos);

        r = run("eval --pred " + q(dir / "same") + " --gt " + q(dir / "gt") + " --paired-against " + q(dir / "same2"));
        REQUIRE(r.code == 0);
        CHECK(r.out.find("t 0 df 4 p 1 ") != std::string::npos);

        fs::remove(dir / "same2" / "case2.png");
        r = run("eval --pred " + q(dir / "same2") + " --gt " + q(dir / "gt"));
        CHECK(r.code == 2);
        CHECK(r.out.find("case2.png") != std::string::npos);
    }

    TEST_CASE("bench reports machine-readable rates")
    {
        const fs::path dir = testing::scratch_dir("cli_bench");
        const fs::path cfg = small_config_file(dir);
        const Run r = run("bench --config " + q(cfg) + " --count 4 --threads 2 --json");
        REQUIRE_MESSAGE(r.code == 0, r.out);
        const json j = json::parse(r.out.substr(r.out.find('{')));
        CHECK(j.at("count") == 4);
        CHECK(j.at("single").at("samples_per_s").get<double>() > 0.0);
        CHECK(j.at("multi").at("samples_per_s").get<double>() > 0.0);
        CHECK(j.at("stages_seconds").is_object());
        const Run text = run("bench --config " + q(cfg) + " --count 2");
        CHECK(text.code == 0);
        CHECK(text.out.find("samples/s") != std::string::npos);
    }

    TEST_CASE("validate-config prints the hash")
    {
        const fs::path dir = testing::scratch_dir("cli_validate");
        const fs::path cfg = small_config_file(dir);
        const Run r = run("validate-config --config " + q(cfg));
        REQUIRE(r.code == 0);
        CHECK(r.out == "ok " + config_hash(load_config(cfg)) + "\n");
        std::ofstream(dir / "bad.json") << R"({"canvas": {"limit1_range": [0.1, 0.95]}})";
        const Run bad = run("validate-config --config " + q(dir / "bad.json"));
        CHECK(bad.code == 2);
        CHECK(bad.out.find("CanvasSpec") != std::string::npos);
    }
}
