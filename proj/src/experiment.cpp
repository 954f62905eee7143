#include "texdiff/experiment.hpp"

#include "texdiff/error.hpp"
#include "texdiff/image_io.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>

namespace texdiff {
namespace fs = std::filesystem;
using classify::FeatureTable;
using classify::SweepResult;

namespace {

std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(sep, start);
        out.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

std::vector<std::string_view> lines_of(std::string_view text) {
    std::vector<std::string_view> out;
    for (auto line : split(text, '\n')) {
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (!line.empty()) out.push_back(line);
    }
    return out;
}

template <class T>
bool parse_number(std::string_view s, T& out) {
    const auto* end = s.data() + s.size();
    const auto [ptr, ec] = std::from_chars(s.data(), end, out);
    return ec == std::errc() && ptr == end;
}

std::string read_text(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string short_digest(std::string_view text) { return sha256_hex(text).substr(0, 16); }

} // namespace

std::string format_float(double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", value);
    return buf;
}

std::string format_exact(double value) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, ptr);
}

std::string sha256_hex(std::string_view bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (!EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr))
        throw Error("SHA-256 computation failed");
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(hex[digest[i] >> 4]);
        out.push_back(hex[digest[i] & 0xF]);
    }
    return out;
}

std::string dataset_digest(const Dataset& dataset) {
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
    if (!ctx || !EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr)) throw Error("SHA-256 init failed");
    auto feed = [&](const void* data, std::size_t n) {
        if (!EVP_DigestUpdate(ctx.get(), data, n)) throw Error("SHA-256 update failed");
    };
    for (const auto& item : dataset.items) {
        const std::string header = dataset.class_names.at(static_cast<std::size_t>(item.class_id)) + "/" +
                                   fs::path(item.source_path).filename().string() + ":" +
                                   std::to_string(item.image.width()) + "x" + std::to_string(item.image.height()) + "\n";
        feed(header.data(), header.size());
        const auto px = item.image.pixels();
        feed(px.data(), px.size_bytes());
    }
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (!EVP_DigestFinal_ex(ctx.get(), digest, &len)) throw Error("SHA-256 final failed");
    return sha256_hex(std::string_view(reinterpret_cast<const char*>(digest), len));
}

std::string method_key(diffusion::Method method, const diffusion::DiffusionParams& p) {
    std::string key(diffusion::method_name(method));
    switch (method) {
    case diffusion::Method::Gaussian: key += " sigma_step=" + format_exact(p.sigma_step); break;
    case diffusion::Method::PeronaMalik: key += " kappa=" + format_exact(p.kappa) + " dt=" + format_exact(p.dt); break;
    case diffusion::Method::ForwardBackward:
        key += " kappa=" + format_exact(p.kappa) + " delta=" + format_exact(p.delta) + " p=" + format_exact(p.p) +
               " grad_floor=" + format_exact(p.grad_floor) + " dt=" + format_exact(p.dt);
        break;
    case diffusion::Method::Nonlocal:
        key += " kappa=" + format_exact(p.kappa) + " epsilon=" + format_exact(p.epsilon) + " dt=" + format_exact(p.dt);
        break;
    }
    return key;
}

std::string descriptor_key(descriptors::Descriptor d, const descriptors::DescriptorOptions& o) {
    std::string key(descriptors::descriptor_name(d));
    if (d == descriptors::Descriptor::LTP) key += " k=" + std::to_string(o.ltp_k);
    if (d == descriptors::Descriptor::CSLBP)
        key += " t=" + format_exact(o.cslbp_threshold) + " median=" + (o.cslbp_median ? "1" : "0");
    return key;
}

std::string feature_table_csv(const FeatureTable& table) {
    std::string out = "label,descriptor_id,it";
    for (std::size_t f = 0; f < table.dim; ++f) out += ",v" + std::to_string(f);
    out += '\n';
    const std::string id(descriptors::descriptor_name(table.descriptor));
    for (std::size_t i = 0; i < table.rows(); ++i) {
        out += std::to_string(table.labels[i]) + ',' + id + ',' + std::to_string(table.it);
        for (double v : table.row(i)) {
            out += ',';
            out += format_exact(v);
        }
        out += '\n';
    }
    return out;
}

FeatureTable parse_feature_table_csv(std::string_view text) {
    const auto lines = lines_of(text);
    if (lines.empty()) throw FormatError("empty feature file");
    const auto header = split(lines[0], ',');
    if (header.size() < 3 || header[0] != "label" || header[1] != "descriptor_id" || header[2] != "it")
        throw FormatError("bad feature file header");
    FeatureTable table;
    table.dim = header.size() - 3;
    for (std::size_t li = 1; li < lines.size(); ++li) {
        const auto fields = split(lines[li], ',');
        if (fields.size() != header.size()) throw FormatError("feature row " + std::to_string(li) + " has wrong width");
        int label = 0;
        int it = 0;
        if (!parse_number(fields[0], label) || !parse_number(fields[2], it))
            throw FormatError("bad label/it in feature row " + std::to_string(li));
        const auto d = descriptors::parse_descriptor(fields[1]);
        if (li == 1) {
            table.descriptor = d;
            table.it = it;
        } else if (d != table.descriptor || it != table.it) {
            throw FormatError("mixed descriptors or scales in feature file");
        }
        for (std::size_t f = 3; f < fields.size(); ++f) {
            double v = 0.0;
            if (!parse_number(fields[f], v) || !std::isfinite(v))
                throw FormatError("bad feature value in row " + std::to_string(li));
            table.values.push_back(v);
        }
        table.labels.push_back(label);
        table.folds.push_back(-1);
    }
    return table;
}

FeatureCache::FeatureCache(fs::path root, const Dataset& dataset, diffusion::DiffusionParams params,
                           descriptors::DescriptorOptions options)
    : root_(std::move(root)), dataset_digest_(dataset_digest(dataset).substr(0, 16)), params_(params),
      options_(options) {}

fs::path FeatureCache::path_for(diffusion::Method method, int it, descriptors::Descriptor d) const {
    const std::string method_dir =
        it == 0 ? std::string("original")
                : std::string(diffusion::method_name(method)) + "-" + short_digest(method_key(method, params_));
    const std::string descriptor_dir =
        std::string(descriptors::descriptor_name(d)) + "-" + short_digest(descriptor_key(d, options_));
    char name[32];
    std::snprintf(name, sizeof name, "it_%04d.csv", it);
    return root_ / dataset_digest_ / method_dir / descriptor_dir / name;
}

std::optional<FeatureTable> FeatureCache::load(diffusion::Method method, int it, descriptors::Descriptor d) {
    const fs::path path = path_for(method, it, d);
    std::error_code ec;
    if (!fs::exists(path, ec)) return std::nullopt;
    try {
        FeatureTable table = parse_feature_table_csv(read_text(path));
        if (table.descriptor != d || table.it != it || table.dim != descriptors::feature_length(d))
            throw FormatError("feature file does not match its cache key");
        return table;
    } catch (const Error& e) {
        std::cerr << "warning: corrupt feature cache entry " << path.string() << " (" << e.what()
                  << "); recomputing\n";
        return std::nullopt;
    }
}

void FeatureCache::store(diffusion::Method method, int it, const FeatureTable& table) {
    const fs::path path = path_for(method, it, table.descriptor);
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
    if (ec) throw IoError("cannot create cache directory " + path.parent_path().string());
    write_file_atomic(path, feature_table_csv(table));
}

void ExperimentConfig::validate() const {
    if (n_scales < 1) throw ParameterError("--scales must be >= 1");
    if (folds < 2) throw ParameterError("--folds must be >= 2");
    if (methods.empty() || descriptors.empty() || classifiers.empty())
        throw ParameterError("methods, descriptors and classifiers must be nonempty");
    if (options.ltp_k < 0) throw ParameterError("--ltp-k must be >= 0");
    params.validate();
}

classify::FeatureStats run_extract(const ExperimentConfig& config, const Dataset& dataset) {
    config.validate();
    if (config.cache_dir.empty()) throw ConfigError("extract needs a cache directory");
    FeatureCache cache(config.cache_dir, dataset, config.params, config.options);
    classify::FeatureStats total;
    for (auto method : config.methods) {
        classify::SweepSpec spec{method, config.descriptors, config.classifiers, config.n_scales, config.params,
                                 config.options};
        const auto s = classify::visit_feature_tables(dataset, spec, &cache, [](int, const auto&) {});
        total.computed += s.computed;
        total.loaded += s.loaded;
    }
    return total;
}

std::vector<SweepResult> run_sweep(const ExperimentConfig& config, const Dataset& dataset,
                                   classify::FeatureStats* stats) {
    config.validate();
    std::optional<FeatureCache> cache;
    if (!config.cache_dir.empty()) cache.emplace(config.cache_dir, dataset, config.params, config.options);
    std::vector<SweepResult> all;
    classify::FeatureStats total;
    for (auto method : config.methods) {
        classify::SweepSpec spec{method, config.descriptors, config.classifiers, config.n_scales, config.params,
                                 config.options};
        classify::FeatureStats s;
        auto cells = classify::sweep_cells(dataset, spec, cache ? &*cache : nullptr, &s);
        total.computed += s.computed;
        total.loaded += s.loaded;
        all.insert(all.end(), std::make_move_iterator(cells.begin()), std::make_move_iterator(cells.end()));
    }
    if (stats) *stats = total;
    return all;
}

std::string summary_csv(const std::vector<SweepResult>& results) {
    std::string out = "method,descriptor,classifier,baseline,best,best_it\n";
    for (const auto& r : results) {
        out += std::string(diffusion::method_name(r.method)) + ',' +
               std::string(descriptors::descriptor_name(r.descriptor)) + ',' +
               std::string(classify::classifier_name(r.classifier)) + ',' + format_float(r.baseline.mean) + ',' +
               format_float(r.best().mean) + ',' + std::to_string(r.best_it) + '\n';
    }
    return out;
}

std::string curves_csv(const std::vector<SweepResult>& results) {
    std::string out = "method,descriptor,classifier,it,mean_acc,std_acc\n";
    for (const auto& r : results) {
        const std::string prefix = std::string(diffusion::method_name(r.method)) + ',' +
                                   std::string(descriptors::descriptor_name(r.descriptor)) + ',' +
                                   std::string(classify::classifier_name(r.classifier)) + ',';
        out += prefix + "0," + format_float(r.baseline.mean) + ',' + format_float(r.baseline.std) + '\n';
        for (std::size_t i = 0; i < r.per_iteration.size(); ++i)
            out += prefix + std::to_string(i + 1) + ',' + format_float(r.per_iteration[i].mean) + ',' +
                   format_float(r.per_iteration[i].std) + '\n';
    }
    return out;
}

void write_sweep_outputs(const fs::path& out_dir, const std::vector<SweepResult>& results) {
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create output directory " + out_dir.string());
    write_file_atomic(out_dir / "summary.csv", summary_csv(results));
    write_file_atomic(out_dir / "curves.csv", curves_csv(results));
}

std::vector<ReportCell> load_report(const std::vector<fs::path>& result_dirs) {
    std::vector<ReportCell> cells;
    for (const auto& dir : result_dirs) {
        const fs::path summary = dir / "summary.csv";
        if (!fs::exists(summary)) throw IoError("missing results file: " + summary.string());
        std::string name = fs::weakly_canonical(dir).filename().string();
        if (name.empty()) name = dir.string();

        const std::string text = read_text(summary);
        const auto lines = lines_of(text);
        if (lines.empty() || lines[0] != "method,descriptor,classifier,baseline,best,best_it")
            throw FormatError("unexpected summary header in " + summary.string());
        std::map<std::string, std::size_t> index;
        for (std::size_t li = 1; li < lines.size(); ++li) {
            const auto f = split(lines[li], ',');
            ReportCell cell;
            if (f.size() != 6 || !parse_number(f[3], cell.baseline) || !parse_number(f[4], cell.best) ||
                !parse_number(f[5], cell.best_it))
                throw FormatError("malformed summary row " + std::to_string(li) + " in " + summary.string());
            cell.dataset = name;
            cell.method = f[0];
            cell.descriptor = f[1];
            cell.classifier = f[2];
            cell.gain = cell.best - cell.baseline;
            index[cell.method + ',' + cell.descriptor + ',' + cell.classifier] = cells.size();
            cells.push_back(std::move(cell));
        }

        const fs::path curves = dir / "curves.csv";
        if (!fs::exists(curves)) continue;
        const std::string ctext = read_text(curves);
        const auto clines = lines_of(ctext);
        for (std::size_t li = 1; li < clines.size(); ++li) {
            const auto f = split(clines[li], ',');
            int it = 0;
            double mean = 0.0;
            if (f.size() != 6 || !parse_number(f[3], it) || !parse_number(f[4], mean))
                throw FormatError("malformed curves row " + std::to_string(li) + " in " + curves.string());
            const auto found = index.find(std::string(f[0]) + ',' + std::string(f[1]) + ',' + std::string(f[2]));
            if (found == index.end() || it == 0) continue;
            auto& cell = cells[found->second];
            const double delta = mean - cell.baseline;
            if (delta < 0.0) {
                ++cell.negative_points;
                cell.worst_delta = std::min(cell.worst_delta, delta);
            }
        }
    }
    std::stable_sort(cells.begin(), cells.end(), [](const ReportCell& a, const ReportCell& b) { return a.gain > b.gain; });
    return cells;
}

std::string format_report(const std::vector<ReportCell>& cells) {
    std::ostringstream out;
    char line[256];
    std::snprintf(line, sizeof line, "%-12s %-9s %-10s %-10s %9s %9s %7s %8s  %s\n", "dataset", "method", "descriptor",
                  "classifier", "baseline", "best", "best_it", "gain", "flags");
    out << line;
    for (const auto& c : cells) {
        std::string flags;
        if (c.gain < 0.0) flags += "NEGATIVE-GAIN ";
        if (c.negative_points > 0)
            flags += std::to_string(c.negative_points) + " iterations below baseline (worst " +
                     format_float(c.worst_delta) + ")";
        std::snprintf(line, sizeof line, "%-12s %-9s %-10s %-10s %9s %9s %7d %+8.2f  %s\n", c.dataset.c_str(),
                      c.method.c_str(), c.descriptor.c_str(), c.classifier.c_str(), format_float(c.baseline).c_str(),
                      format_float(c.best).c_str(), c.best_it, c.gain, flags.c_str());
        out << line;
    }
    return out.str();
}

DiffuseOutput run_diffuse(const fs::path& image_path, diffusion::Method method, int n_scales,
                          const diffusion::DiffusionParams& params, const fs::path& out_dir) {
    if (n_scales < 1) throw ParameterError("--scales must be >= 1");
    params.validate();
    const Image source = load_image(image_path);
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create output directory " + out_dir.string());

    const std::string stem = image_path.stem().string() + "_" + std::string(diffusion::method_name(method));
    DiffuseOutput out;
    Image current = source;
    for (int it = 1; it <= n_scales; ++it) {
        current = diffusion::advance(method, source, current, it, params);
        if (!current.all_finite())
            throw NumericalError("non-finite intensity at iteration " + std::to_string(it));
        const fs::path frame = out_dir / (stem + "_" + std::to_string(it) + ".pgm");
        write_pgm(frame, current);
        out.frames.push_back(frame);
    }

    std::string manifest;
    manifest += "source=" + image_path.string() + "\n";
    manifest += "method=" + std::string(diffusion::method_name(method)) + "\n";
    manifest += "n_scales=" + std::to_string(n_scales) + "\n";
    manifest += "kappa=" + format_float(params.kappa) + "\n";
    manifest += "delta=" + format_float(params.delta) + "\n";
    manifest += "p=" + format_float(params.p) + "\n";
    manifest += "epsilon=" + format_float(params.epsilon) + "\n";
    manifest += "dt=" + format_float(params.dt) + "\n";
    manifest += "sigma_step=" + format_float(params.sigma_step) + "\n";
    manifest += "grad_floor=" + format_float(params.grad_floor) + "\n";
    for (std::size_t i = 0; i < out.frames.size(); ++i)
        manifest += "frame_" + std::to_string(i + 1) + "=" + out.frames[i].filename().string() + "\n";
    out.manifest = out_dir / (stem + "_manifest.txt");
    write_file_atomic(out.manifest, manifest);
    return out;
}

} // namespace texdiff
