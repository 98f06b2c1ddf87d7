#include "cli.hpp"

#include <CLI11.hpp>

#include <atomic>
#include <cmath>
#include <chrono>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <thread>

#include "report.hpp"
#include "voiptap/analysis.hpp"
#include "voiptap/capture.hpp"
#include "voiptap/error.hpp"
#include "voiptap/store.hpp"
#include "voiptap/transport.hpp"
#include "voiptap/wav.hpp"

namespace voiptap::cli {
namespace {

std::atomic<bool> g_stop{false};

// Bad flag combinations detected after CLI11 has parsed successfully.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct SourceFlags {
    std::optional<double> sine_hz;
    double amp = 1.0;
    double dc = 0.0;
    bool noise = false;
    std::uint64_t seed = 0;
    bool impulse = false;
    bool silence = false;
    std::string wav_in;
    double secs = 1.0;
    bool clip = false;

    void attach(CLI::App& app) {
        app.add_option("--sine", sine_hz, "Sine source frequency (Hz)");
        app.add_option("--amp", amp, "Amplitude, 0..1 of full scale")->capture_default_str();
        app.add_option("--dc", dc, "DC offset, -1..1")->capture_default_str();
        app.add_flag("--noise", noise, "White-noise source (uses --amp and --seed)");
        app.add_option("--seed", seed, "Noise generator seed")->capture_default_str();
        app.add_flag("--impulse", impulse, "Unit impulse followed by midscale");
        app.add_flag("--silence", silence, "Constant midscale");
        app.add_option("--wav-in", wav_in, "Replay an 8- or 16-bit mono WAV file");
        app.add_option("--secs", secs, "Stream length in seconds")->capture_default_str();
        app.add_flag("--allow-clipping", clip, "Permit amplitude + |dc| > 1");
    }

    SignalSource build() const {
        const int chosen = (sine_hz ? 1 : 0) + (noise ? 1 : 0) + (impulse ? 1 : 0) +
                           (silence ? 1 : 0) + (wav_in.empty() ? 0 : 1);
        if (chosen != 1) {
            throw UsageError("choose exactly one source: --sine, --noise, --impulse, --silence or --wav-in");
        }
        if (!(secs > 0.0)) {
            throw UsageError("--secs must be positive");
        }
        SignalSource src;
        src.duration_s = secs;
        src.allow_clipping = clip;
        if (sine_hz) {
            src.kind = source::Sine{*sine_hz, amp, dc};
        } else if (noise) {
            src.kind = source::WhiteNoise{amp, seed};
        } else if (impulse) {
            src.kind = source::Impulse{};
        } else if (silence) {
            src.kind = source::Sine{0.0, 0.0, 0.0};
        } else {
            src.kind = source::WavFile{wav_in};
        }
        return src;
    }
};

const std::map<std::string, HeaderMode> kHeaderModes{{"standard", HeaderMode::standard},
                                                     {"legacy", HeaderMode::legacy}};
const std::vector<std::string> kWireModes{"raw", "hex"};
const std::map<std::string, analysis::Normalization> kNormalizations{
    {"peak", analysis::Normalization::peak},
    {"rms", analysis::Normalization::rms},
    {"none", analysis::Normalization::none}};

SampleStream generate_or_usage(const SignalSource& src, const SamplerConfig& cfg) {
    try {
        return generate(src, cfg);
    } catch (const ConfigError& e) {
        throw UsageError(e.what());
    } catch (const DomainError& e) {
        throw UsageError(e.what());
    }
}

analysis::Signal load_signal(const std::string& path, bool detrend, analysis::Normalization norm) {
    const auto art = read_wav(path);
    analysis::Signal sig{art.first_channel(), static_cast<double>(art.params.sample_rate_hz)};
    if (detrend) {
        sig = analysis::detrend(sig);
    }
    return analysis::normalize(sig, norm);
}

bool looks_like_json(const std::string& path) {
    return std::filesystem::path(path).extension() == ".json";
}

analysis::SignalStats load_stats(const std::string& path, bool detrend, analysis::Normalization norm) {
    if (looks_like_json(path)) {
        std::ifstream in(path);
        if (!in) {
            throw IoError("cannot open for reading", path);
        }
        try {
            return stats_from_json(nlohmann::json::parse(in));
        } catch (const nlohmann::json::exception& e) {
            throw Error("malformed stats file " + path + ": " + e.what());
        }
    }
    return analysis::stats(load_signal(path, detrend, norm));
}

}  // namespace

void request_stop() { g_stop = true; }

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Audio capture, streaming, recording and acoustic analysis"};
    app.name("voiptap");
    app.require_subcommand(1);
    app.set_config("--config", "", "key=value file mirroring the command-line flags");

    // gen
    auto* gen = app.add_subcommand("gen", "Write a synthetic sample stream as an 8-bit WAV");
    SourceFlags gen_src;
    gen_src.attach(*gen);
    double gen_rate = 16000.0;
    HeaderMode gen_header = HeaderMode::standard;
    std::string gen_out = "gen.wav";
    gen->add_option("--rate", gen_rate, "Sample rate (Hz)")->capture_default_str()->check(CLI::PositiveNumber);
    gen->add_option("--header-mode", gen_header, "standard or legacy")
        ->transform(CLI::CheckedTransformer(kHeaderModes, CLI::ignore_case));
    gen->add_option("--out,-o", gen_out, "Output WAV path")->capture_default_str();

    // serve
    auto* serve = app.add_subcommand("serve", "Stream a source over TCP in real time");
    SourceFlags serve_src;
    serve_src.attach(*serve);
    double serve_rate = 16000.0;
    std::uint16_t serve_port = 1234;
    std::string serve_wire_s = "raw";
    bool serve_loop = false;
    bool serve_legacy_tick = false;
    std::size_t serve_capacity = RingBuffer::kDefaultCapacity;
    double serve_stop_after = 0.0;
    serve->add_option("--rate", serve_rate, "Sample rate (Hz)")->capture_default_str()->check(CLI::PositiveNumber);
    serve->add_option("--port", serve_port, "TCP port")->capture_default_str();
    serve->add_option("--wire", serve_wire_s, "raw or hex")->capture_default_str()->check(CLI::IsMember(kWireModes));
    serve->add_flag("--loop", serve_loop, "Repeat the source forever");
    serve->add_flag("--legacy-tick", serve_legacy_tick, "Pace samples with the 62 us firmware tick");
    serve->add_option("--capacity", serve_capacity, "Ring buffer capacity (octets)")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    serve->add_option("--stop-after", serve_stop_after, "Exit after this many seconds (0 = until interrupted)")
        ->capture_default_str();

    // record
    auto* rec = app.add_subcommand("record", "Record a TCP audio stream into a WAV file");
    RecordOptions rec_opts;
    double rec_rate = 16000.0;
    bool rec_upload = false;
    std::string rec_store_dir = "recordings";
    std::string rec_name = "test.wav";
    std::string rec_out = "test.wav";
    rec->add_option("--ip", rec_opts.ip, "Server address")->capture_default_str();
    rec->add_option("--port", rec_opts.port, "Server port")->capture_default_str()->check(CLI::Range(1, 65535));
    rec->add_option("--duration,--secs", rec_opts.duration_s, "Recording window (s)")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    rec->add_option("--out,-o", rec_out, "Output WAV path")->capture_default_str();
    std::string rec_wire_s = "raw";
    rec->add_option("--wire", rec_wire_s, "raw or hex")->capture_default_str()->check(CLI::IsMember(kWireModes));
    rec->add_option("--header-mode", rec_opts.wav.header_mode, "standard or legacy")
        ->transform(CLI::CheckedTransformer(kHeaderModes, CLI::ignore_case));
    rec->add_option("--rate", rec_rate, "Sample rate written to the header (Hz)")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    rec->add_flag("--upload", rec_upload, "Archive the recording (STORE_URL, else --store-dir)");
    rec->add_option("--store-dir", rec_store_dir, "Local archive directory")->capture_default_str();
    rec->add_option("--name", rec_name, "Display name in the archive")->capture_default_str();

    // analyze
    auto* ana = app.add_subcommand("analyze", "Signal statistics and spectral products of a WAV file");
    std::string ana_in;
    bool ana_detrend = false;
    auto ana_norm = analysis::Normalization::peak;
    std::string ana_out_dir;
    bool ana_json = false;
    bool ana_stats_only = false;
    std::size_t ana_winlen = 1024;
    ana->add_option("wav", ana_in, "Input WAV")->required();
    ana->add_flag("--detrend", ana_detrend, "Remove the least-squares line first");
    ana->add_option("--normalize", ana_norm, "peak, rms or none")
        ->transform(CLI::CheckedTransformer(kNormalizations, CLI::ignore_case));
    ana->add_option("--out-dir", ana_out_dir, "Directory for CSV and JSON artifacts (default <wav>_analysis)");
    ana->add_flag("--json", ana_json, "Print statistics as JSON instead of a table");
    ana->add_flag("--stats-only", ana_stats_only, "Skip the CSV artifacts");
    ana->add_option("--winlen", ana_winlen, "Spectrogram/cepstrogram window length")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);

    // compare
    auto* cmp = app.add_subcommand("compare", "Ratio of each statistic to a reference recording");
    std::string cmp_candidate;
    std::string cmp_reference;
    bool cmp_detrend = false;
    auto cmp_norm = analysis::Normalization::peak;
    bool cmp_json = false;
    cmp->add_option("candidate", cmp_candidate, "Candidate WAV or stats JSON")->required();
    cmp->add_option("reference", cmp_reference, "Reference WAV or stats JSON")->required();
    cmp->add_flag("--detrend", cmp_detrend, "Remove the least-squares line first");
    cmp->add_option("--normalize", cmp_norm, "peak, rms or none")
        ->transform(CLI::CheckedTransformer(kNormalizations, CLI::ignore_case));
    cmp->add_flag("--json", cmp_json, "Print the table as JSON");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "voiptap: " << e.what() << '\n';
        if (!app.get_subcommands().empty()) {
            err << app.get_subcommands().front()->help();
        }
        return kUsageError;
    }

    try {
        if (*gen) {
            SamplerConfig cfg;
            cfg.sample_rate_hz = gen_rate;
            cfg.tick_us = 1e6 / gen_rate;
            const auto stream = generate_or_usage(gen_src.build(), cfg);
            WavArtifact art;
            art.params.sample_rate_hz = static_cast<std::uint32_t>(std::llround(gen_rate));
            art.params.header_mode = gen_header;
            art.samples = stream;
            write_wav(art, gen_out);
            out << "wrote " << stream.size() << " samples to " << gen_out << '\n';
            return kOk;
        }

        if (*serve) {
            SamplerConfig cfg = serve_legacy_tick ? SamplerConfig::legacy() : SamplerConfig{};
            cfg.sample_rate_hz = serve_rate;
            if (!serve_legacy_tick) cfg.tick_us = 1e6 / serve_rate;
            auto stream = generate_or_usage(serve_src.build(), cfg);

            RingBuffer buf(serve_capacity);
            TransportConfig tcfg;
            tcfg.port = serve_port;
            const WireMode serve_wire = parse_wire_mode(serve_wire_s);
            tcfg.wire_mode = serve_wire;
            AudioServer server(tcfg, buf);
            server.start();
            out << "listening on port " << server.port() << " (" << to_string(serve_wire) << ")" << std::endl;

            PacedProducer producer(std::move(stream), buf, cfg, serve_loop);
            producer.start();
            g_stop = false;
            const auto t0 = std::chrono::steady_clock::now();
            while (!g_stop) {
                if (serve_stop_after > 0.0 &&
                    std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() >= serve_stop_after) {
                    break;
                }
                std::this_thread::sleep_for(std::chrono::milliseconds(20));
            }
            producer.stop();
            server.stop();
            const auto st = server.stats();
            out << "produced " << producer.produced() << " samples, dropped " << producer.dropped()
                << ", sent " << st.frames_sent << " frames (" << st.octets_sent << " octets) to "
                << st.clients_accepted << " client(s)" << std::endl;
            return kOk;
        }

        if (*rec) {
            rec_opts.out = rec_out;
            rec_opts.wire_mode = parse_wire_mode(rec_wire_s);
            rec_opts.wav.sample_rate_hz = static_cast<std::uint32_t>(std::llround(rec_rate));
            std::unique_ptr<StoreBackend> store;
            if (rec_upload) {
                store = HttpStore::from_environment();
                if (!store) store = std::make_unique<LocalDirectoryStore>(rec_store_dir);
                rec_opts.archive = store.get();
                rec_opts.archive_name = rec_name;
            }
            const auto result = record(rec_opts);
            out << "recorded " << result.artifact.sample_count() << " samples to " << result.path.string()
                << (result.partial ? " (server disconnected early)" : "") << '\n';
            if (result.archive_error) {
                err << "voiptap: upload failed, recording kept at " << result.path.string() << ": "
                    << *result.archive_error << '\n';
                return kRuntimeFailure;
            }
            if (result.entry) {
                out << "uploaded " << result.entry->display_name << " id=" << result.entry->unique_id << '\n';
            }
            return kOk;
        }

        if (*ana) {
            const auto sig = load_signal(ana_in, ana_detrend, ana_norm);
            const auto st = analysis::stats(sig);
            if (ana_json) {
                out << stats_to_json(st).dump(2) << '\n';
            } else {
                print_stats_table(out, st);
            }
            const std::filesystem::path dir =
                ana_out_dir.empty() ? std::filesystem::path(std::filesystem::path(ana_in).replace_extension("").string() + "_analysis")
                                    : std::filesystem::path(ana_out_dir);
            std::filesystem::create_directories(dir);
            {
                std::ofstream js(dir / "stats.json");
                js << stats_to_json(st).dump(2) << '\n';
            }
            if (!ana_stats_only) {
                analysis::SpectralConfig scfg{ana_winlen};
                write_spectrum_csv(dir / "spectrum.csv", analysis::periodogram_power(sig));
                if (sig.size() >= scfg.winlen) {
                    write_spectrogram_csv(dir / "spectrogram.csv", analysis::spectrogram(sig, scfg));
                    write_cepstrogram_csv(dir / "cepstrogram.csv", analysis::cepstrogram(sig, scfg));
                } else {
                    err << "voiptap: signal shorter than " << scfg.winlen
                        << " samples, skipping spectrogram and cepstrogram\n";
                }
                if (sig.size() >= 10) {
                    write_histogram_csv(dir / "histogram.csv", analysis::histogram(sig));
                }
                write_correlogram_csv(dir / "correlogram.csv", analysis::autocorr(sig));
            }
            return kOk;
        }

        if (*cmp) {
            const auto cand = load_stats(cmp_candidate, cmp_detrend, cmp_norm);
            const auto ref = load_stats(cmp_reference, cmp_detrend, cmp_norm);
            const auto rows = analysis::ratio_table(cand, ref);
            if (cmp_json) {
                out << ratios_to_json(rows).dump(2) << '\n';
            } else {
                print_ratio_table(out, rows);
            }
            return kOk;
        }
    } catch (const UsageError& e) {
        err << "voiptap: " << e.what() << '\n';
        return kUsageError;
    } catch (const std::exception& e) {
        err << "voiptap: " << e.what() << '\n';
        return kRuntimeFailure;
    }
    return kUsageError;
}

}  // namespace voiptap::cli
