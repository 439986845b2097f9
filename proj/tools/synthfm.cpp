// synthfm command-line tool.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <csignal>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <set>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>
#include <spdlog/spdlog.h>

#include "synthfm/config.hpp"
#include "synthfm/export.hpp"
#include "synthfm/metrics.hpp"
#include "synthfm/png_io.hpp"
#include "synthfm/prompts.hpp"
#include "synthfm/sample.hpp"
#include "synthfm/server.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace synthfm;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitRuntime = 2;

double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void setup_logging()
{
    spdlog::set_pattern("[%l] %v");
    spdlog::set_level(spdlog::level::info);
    const char* env = std::getenv("SYNTHFM_LOG");
    if (!env || !*env)
        return;
    const std::string level = env;
    if (level == "error")
        spdlog::set_level(spdlog::level::err);
    else if (level == "warn")
        spdlog::set_level(spdlog::level::warn);
    else if (level == "info")
        spdlog::set_level(spdlog::level::info);
    else if (level == "debug")
        spdlog::set_level(spdlog::level::debug);
    else
        spdlog::warn("ignoring unknown SYNTHFM_LOG level '{}'", level);
}

// Config from --config (or defaults) with an optional --seed override.
struct ConfigOptions {
    std::string path;
    std::optional<std::uint64_t> seed;

    void add(CLI::App* cmd)
    {
        cmd->add_option("--config", path, "JSON config file (defaults when omitted)")->check(CLI::ExistingFile);
        cmd->add_option("--seed", seed, "master seed, overrides the config's master_seed");
    }

    GenConfig load() const
    {
        GenConfig cfg = path.empty() ? GenConfig{} : load_config(path);
        if (seed)
            cfg.master_seed = *seed;
        validate(cfg);
        return cfg;
    }
};

// ---- gen -------------------------------------------------------------------

struct GenOptions {
    ConfigOptions config;
    std::uint64_t start = 0;
    std::optional<std::uint64_t> count;
    std::string out;
    int threads = 1;
    std::string split = "train";
};

int run_gen(const GenOptions& o)
{
    GenConfig cfg = o.config.load();
    if (o.split == "val")
        cfg = validation_config(cfg);
    const std::uint64_t count = o.count.value_or(cfg.epoch_size);
    spdlog::info("generating {} samples [{}, {}) into {} (config {})", count, o.start, o.start + count, o.out,
                 config_hash(cfg).substr(0, 12));
    const auto t0 = std::chrono::steady_clock::now();
    const ShardManifest m = export_shard(cfg, o.start, count, o.out, o.threads);
    const double s = seconds_since(t0);
    std::cout << "manifest: " << m.path.string() << "\n";
    std::cout << "samples: " << count << " in " << s << " s (" << (s > 0 ? count / s : 0.0) << " samples/s)\n";
    return 0;
}

// ---- preview ---------------------------------------------------------------

struct PreviewOptions {
    ConfigOptions config;
    int count = 8;
    int tile = 256;
    std::string out;
};

struct Rgb {
    std::uint8_t r, g, b;
};

constexpr Rgb kPalette[] = {
    {31, 119, 180}, {44, 160, 44}, {148, 103, 189}, {23, 190, 207},
    {227, 119, 194}, {140, 86, 75}, {188, 189, 34}, {255, 127, 14},
};
constexpr Rgb kPositive{255, 230, 0};
constexpr Rgb kNegative{230, 20, 20};

class Canvas {
public:
    Canvas(int w, int h) : w_(w), h_(h), px_(static_cast<std::size_t>(w) * h * 3, 40) {}

    void set(int x, int y, Rgb c)
    {
        if (x < 0 || y < 0 || x >= w_ || y >= h_)
            return;
        auto* p = &px_[(static_cast<std::size_t>(y) * w_ + x) * 3];
        p[0] = c.r;
        p[1] = c.g;
        p[2] = c.b;
    }

    void marker(int cx, int cy, Rgb c, int radius)
    {
        for (int dy = -radius - 1; dy <= radius + 1; ++dy)
            for (int dx = -radius - 1; dx <= radius + 1; ++dx) {
                const int d2 = dx * dx + dy * dy;
                if (d2 <= radius * radius)
                    set(cx + dx, cy + dy, c);
                else if (d2 <= (radius + 1) * (radius + 1))
                    set(cx + dx, cy + dy, {0, 0, 0});
            }
    }

    int width() const { return w_; }
    int height() const { return h_; }
    const std::vector<std::uint8_t>& pixels() const { return px_; }

private:
    int w_, h_;
    std::vector<std::uint8_t> px_;
};

std::uint8_t blend(std::uint8_t a, std::uint8_t b, double alpha)
{
    return static_cast<std::uint8_t>(std::lround(a * (1.0 - alpha) + b * alpha));
}

void draw_tile(Canvas& canvas, int ox, int oy, int tile, const SampleRecord& rec)
{
    const int w = rec.image.width();
    const int h = rec.image.height();
    const double scale = static_cast<double>(tile) / std::max(w, h);
    const int tw = std::max(1, static_cast<int>(w * scale));
    const int th = std::max(1, static_cast<int>(h * scale));

    for (int ty = 0; ty < th; ++ty) {
        const int sy = std::min(h - 1, static_cast<int>((ty + 0.5) / scale));
        for (int tx = 0; tx < tw; ++tx) {
            const int sx = std::min(w - 1, static_cast<int>((tx + 0.5) / scale));
            const auto g = static_cast<std::uint8_t>(std::lround(std::clamp(rec.image(sx, sy), 0.0f, 1.0f) * 255));
            Rgb c{g, g, g};
            for (std::size_t k = 0; k < rec.instance_masks.size(); ++k) {
                if (!rec.instance_masks[k](sx, sy))
                    continue;
                const Rgb m = kPalette[k % std::size(kPalette)];
                const double alpha = k == rec.target_index ? 0.55 : 0.30;
                c = {blend(c.r, m.r, alpha), blend(c.g, m.g, alpha), blend(c.b, m.b, alpha)};
                break;
            }
            canvas.set(ox + tx, oy + ty, c);
        }
    }

    if (!rec.prompts)
        return;
    const int radius = std::max(2, tile / 64);
    auto place = [&](const Pixel& p, Rgb c) {
        canvas.marker(ox + static_cast<int>((p.x + 0.5) * scale), oy + static_cast<int>((p.y + 0.5) * scale), c,
                      radius);
    };
    for (const Pixel& p : rec.prompts->negatives)
        place(p, kNegative);
    for (const Pixel& p : rec.prompts->positives)
        place(p, kPositive);
}

int run_preview(const PreviewOptions& o)
{
    const GenConfig cfg = o.config.load();
    const int cols = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(o.count))));
    const int rows = (o.count + cols - 1) / cols;
    const int gap = 4;
    Canvas canvas(cols * o.tile + (cols + 1) * gap, rows * o.tile + (rows + 1) * gap);
    for (int i = 0; i < o.count; ++i) {
        const SampleRecord rec = generate_sample(cfg, static_cast<std::uint64_t>(i));
        spdlog::debug("sample {}: {} with {} instances", i, to_string(rec.module_kind), rec.instance_masks.size());
        draw_tile(canvas, gap + (i % cols) * (o.tile + gap), gap + (i / cols) * (o.tile + gap), o.tile, rec);
    }
    write_png_rgb8(o.out, canvas.width(), canvas.height(), canvas.pixels());
    std::cout << "gallery: " << o.out << " (" << o.count << " tiles)\n";
    return 0;
}

// ---- prompts ---------------------------------------------------------------

struct PromptsOptions {
    std::string mask;
    int npos = 1;
    int nneg = 0;
    std::uint64_t seed = 0;
    std::optional<int> dilation;
};

int run_prompts(const PromptsOptions& o)
{
    const BinaryMask mask = read_mask_png(o.mask);
    Rng rng(o.seed);
    const int dilation = o.dilation.value_or(default_band_dilation(mask.width(), mask.height()));
    const PromptSet set = sample_prompts(mask, {o.npos, o.nneg}, rng, dilation);
    for (const Pixel& p : set.positives)
        std::cout << json{{"role", "positive"}, {"x", p.x}, {"y", p.y}}.dump() << "\n";
    for (const Pixel& p : set.negatives)
        std::cout << json{{"role", "negative"}, {"x", p.x}, {"y", p.y}}.dump() << "\n";
    return 0;
}

// ---- eval ------------------------------------------------------------------

struct EvalOptions {
    std::string pred;
    std::string gt;
    std::string paired;
    std::string tails = "two";
};

std::set<std::string> png_names(const fs::path& dir)
{
    if (!fs::is_directory(dir))
        throw IoError("not a directory: " + dir.string());
    std::set<std::string> names;
    for (const auto& e : fs::directory_iterator(dir))
        if (e.is_regular_file() && e.path().extension() == ".png")
            names.insert(e.path().filename().string());
    return names;
}

void require_same_names(const std::set<std::string>& a, const std::string& a_dir, const std::set<std::string>& b,
                        const std::string& b_dir)
{
    std::vector<std::string> orphans;
    for (const auto& n : a)
        if (!b.contains(n))
            orphans.push_back(a_dir + "/" + n);
    for (const auto& n : b)
        if (!a.contains(n))
            orphans.push_back(b_dir + "/" + n);
    if (orphans.empty())
        return;
    std::string msg = "file names do not match; orphans:";
    for (const auto& n : orphans)
        msg += "\n  " + n;
    throw IoError(msg);
}

std::vector<double> dice_scores(const fs::path& pred, const fs::path& gt, const std::set<std::string>& names)
{
    std::vector<double> out;
    for (const auto& n : names)
        out.push_back(dice(read_mask_png(pred / n), read_mask_png(gt / n)));
    return out;
}

int run_eval(const EvalOptions& o)
{
    const auto names = png_names(o.gt);
    require_same_names(png_names(o.pred), o.pred, names, o.gt);
    if (names.empty())
        throw IoError("no .png masks in " + o.gt);

    const auto scores = dice_scores(o.pred, o.gt, names);
    std::size_t i = 0;
    for (const auto& n : names)
        std::cout << n << "\t" << scores[i++] << "\n";
    const Summary s = summarize(scores);
    std::cout << "DSC mean " << s.mean << " +/- " << s.sd << " (n=" << scores.size() << ")\n";

    if (o.paired.empty())
        return 0;
    require_same_names(png_names(o.paired), o.paired, names, o.gt);
    const auto other = dice_scores(o.paired, o.gt, names);
    const Summary so = summarize(other);
    std::cout << "paired DSC mean " << so.mean << " +/- " << so.sd << "\n";
    const TTestResult r = paired_t_test({scores, other}, o.tails == "one" ? Tails::one_greater : Tails::two);
    std::cout << "t " << r.t_statistic << " df " << r.degrees_of_freedom << " p " << r.p_value << " ("
              << (o.tails == "one" ? "one" : "two") << "-tailed) " << to_string(classify(r.p_value)) << "\n";
    return 0;
}

// ---- serve -----------------------------------------------------------------

struct ServeOptions {
    ConfigOptions config;
    std::string bind = "127.0.0.1:7431";
};

std::atomic<bool> g_stop{false};

extern "C" void on_signal(int)
{
    g_stop = true;
}

int run_serve(const ServeOptions& o)
{
    const GenConfig cfg = o.config.load();
    const BindAddress bind = parse_bind(o.bind);
    SampleServer server(cfg, bind);
    server.on_event = [](const std::string& what) { spdlog::debug("{}", what); };
    server.start();
    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);
    std::cout << "listening on " << bind.host << ":" << server.port() << " config " << server.config_hash()
              << std::endl;
    while (!g_stop.load())
        std::this_thread::sleep_for(std::chrono::milliseconds(100));
    spdlog::info("shutting down");
    server.stop();
    return 0;
}

// ---- bench -----------------------------------------------------------------

struct BenchOptions {
    ConfigOptions config;
    int count = 10;
    int threads = 1;
    bool json = false;
};

double bench_pass(const GenConfig& cfg, int count, int threads, StageTimes* times)
{
    std::atomic<int> next{0};
    std::vector<StageTimes> per_thread(threads);
    auto worker = [&](int t) {
        for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1))
            generate_sample(cfg, static_cast<std::uint64_t>(i), &per_thread[t]);
    };
    const auto t0 = std::chrono::steady_clock::now();
    if (threads == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t)
            pool.emplace_back(worker, t);
        for (auto& th : pool)
            th.join();
    }
    const double s = seconds_since(t0);
    if (times)
        for (const auto& pt : per_thread)
            times->merge(pt);
    return s;
}

int run_bench(const BenchOptions& o)
{
    const GenConfig cfg = o.config.load();
    StageTimes stages;
    const double single = bench_pass(cfg, o.count, 1, &stages);
    std::optional<double> multi;
    if (o.threads > 1)
        multi = bench_pass(cfg, o.count, o.threads, nullptr);

    const double single_rate = o.count / single;
    json report{
        {"count", o.count},
        {"width", cfg.image_width},
        {"height", cfg.image_height},
        {"hardware_threads", std::thread::hardware_concurrency()},
        {"single", {{"threads", 1}, {"seconds", single}, {"samples_per_s", single_rate}}},
    };
    json stage_json = json::object();
    for (const auto& [k, v] : stages.seconds)
        stage_json[k] = v;
    report["stages_seconds"] = stage_json;
    if (multi) {
        const double rate = o.count / *multi;
        report["multi"] = {{"threads", o.threads}, {"seconds", *multi}, {"samples_per_s", rate}};
        report["speedup"] = rate / single_rate;
    }

    if (o.json) {
        std::cout << report.dump(2) << "\n";
        return 0;
    }
    std::cout << "1 thread: " << single_rate << " samples/s (" << single << " s for " << o.count << ")\n";
    if (multi)
        std::cout << o.threads << " threads: " << report["multi"]["samples_per_s"].get<double>()
                  << " samples/s, speedup " << report["speedup"].get<double>() << "\n";
    std::cout << "stage breakdown (single-threaded):\n";
    for (const auto& [k, v] : stages.seconds)
        std::cout << "  " << k << "\t" << v << " s\t" << 100.0 * v / single << "%\n";
    return 0;
}

// ---- validate-config ---------------------------------------------------------

int run_validate(const std::string& path)
{
    const GenConfig cfg = load_config(path);
    std::cout << "ok " << config_hash(cfg) << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    setup_logging();

    CLI::App app{"synthfm: synthetic segmentation sample generator"};
    app.get_formatter()->column_width(44);
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "help for every subcommand");

    GenOptions gen;
    auto* gen_cmd = app.add_subcommand("gen", "export a shard of samples to disk");
    gen.config.add(gen_cmd);
    gen_cmd->add_option("--start", gen.start, "first sample index")->capture_default_str();
    gen_cmd->add_option("--count", gen.count, "number of samples (default: epoch_size)");
    gen_cmd->add_option("--out", gen.out, "output directory")->required();
    gen_cmd->add_option("--threads", gen.threads, "worker threads")->check(CLI::Range(1, 256))->capture_default_str();
    gen_cmd->add_option("--split", gen.split, "train or val stream")
        ->check(CLI::IsMember({"train", "val"}))
        ->capture_default_str();

    PreviewOptions preview;
    auto* preview_cmd = app.add_subcommand("preview", "render a tiled PNG gallery of samples");
    preview.config.add(preview_cmd);
    preview_cmd->add_option("--count", preview.count, "number of tiles (at most 64)")
        ->check(CLI::Range(1, 64))
        ->capture_default_str();
    preview_cmd->add_option("--tile", preview.tile, "tile edge in pixels")
        ->check(CLI::Range(16, 1024))
        ->capture_default_str();
    preview_cmd->add_option("--out", preview.out, "gallery PNG path")->required();

    PromptsOptions prompts;
    auto* prompts_cmd = app.add_subcommand("prompts", "sample click prompts for a mask PNG");
    prompts_cmd->add_option("--mask", prompts.mask, "8-bit mask PNG (nonzero = foreground)")->required();
    prompts_cmd->add_option("--npos", prompts.npos, "positive clicks")->check(CLI::Range(1, 1000))->capture_default_str();
    prompts_cmd->add_option("--nneg", prompts.nneg, "negative clicks")->check(CLI::Range(0, 1000))->capture_default_str();
    prompts_cmd->add_option("--seed", prompts.seed, "random seed")->capture_default_str();
    prompts_cmd->add_option("--dilation", prompts.dilation, "negative band width in dilation steps")
        ->check(CLI::Range(1, 10000));

    EvalOptions eval;
    auto* eval_cmd = app.add_subcommand("eval", "Dice scores and paired t-test over mask directories");
    eval_cmd->add_option("--pred", eval.pred, "predicted masks directory")->required();
    eval_cmd->add_option("--gt", eval.gt, "ground-truth masks directory")->required();
    eval_cmd->add_option("--paired-against", eval.paired, "second prediction directory for the paired t-test");
    eval_cmd->add_option("--tails", eval.tails, "two or one (pred greater)")
        ->check(CLI::IsMember({"two", "one"}))
        ->capture_default_str();

    ServeOptions serve;
    auto* serve_cmd = app.add_subcommand("serve", "stream samples over TCP");
    serve.config.add(serve_cmd);
    serve_cmd->add_option("--bind", serve.bind, "HOST:PORT to listen on")->capture_default_str();

    BenchOptions bench;
    auto* bench_cmd = app.add_subcommand("bench", "time sample generation");
    bench.config.add(bench_cmd);
    bench_cmd->add_option("--count", bench.count, "samples per pass")->check(CLI::Range(1, 1000000))->capture_default_str();
    bench_cmd->add_option("--threads", bench.threads, "threads for the second pass")
        ->check(CLI::Range(1, 256))
        ->capture_default_str();
    bench_cmd->add_flag("--json", bench.json, "machine-readable output");

    std::string validate_path;
    auto* validate_cmd = app.add_subcommand("validate-config", "check a config file and print its hash");
    validate_cmd->add_option("--config", validate_path, "JSON config file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitUsage;
    }

    try {
        if (*gen_cmd)
            return run_gen(gen);
        if (*preview_cmd)
            return run_preview(preview);
        if (*prompts_cmd)
            return run_prompts(prompts);
        if (*eval_cmd)
            return run_eval(eval);
        if (*serve_cmd)
            return run_serve(serve);
        if (*bench_cmd)
            return run_bench(bench);
        if (*validate_cmd)
            return run_validate(validate_path);
    } catch (const std::exception& e) {
        spdlog::error("{}", e.what());
        return kExitRuntime;
    }
    return kExitUsage;
}
