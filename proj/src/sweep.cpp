#include "fqdyn/sweep.hpp"

#include <atomic>
#include <condition_variable>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "fqdyn/io.hpp"

namespace fqdyn {

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == ';') {
            if (!trim(cur).empty()) out.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!trim(cur).empty()) out.push_back(trim(cur));
    return out;
}

std::vector<int> parse_range(const std::string& s) {
    auto dots = s.find("..");
    if (dots == std::string::npos) return {std::stoi(s)};
    int lo = std::stoi(s.substr(0, dots));
    int hi = std::stoi(s.substr(dots + 2));
    if (lo > hi || hi - lo > 10000) raise(Errc::ParseError, "bad n range: " + s);
    std::vector<int> out;
    for (int i = lo; i <= hi; ++i) out.push_back(i);
    return out;
}

} // namespace

SweepConfig parse_sweep_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) raise(Errc::ParseError, "cannot open config file " + path);
    SweepConfig cfg;
    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos) raise(Errc::ParseError, "expected key=value, got: " + line);
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        if (key == "field")
            cfg.fields = split_list(val);
        else if (key == "map")
            cfg.maps = split_list(val);
        else if (key == "alpha")
            cfg.alphas = split_list(val);
        else if (key == "alpha_ext")
            cfg.alpha_ext = std::stoi(val);
        else if (key == "op")
            cfg.op = val;
        else if (key == "n")
            cfg.ns = parse_range(val);
        else if (key == "nmax")
            cfg.ns = parse_range("0.." + val);
        else if (key == "f")
            cfg.f = val;
        else if (key == "seed")
            cfg.seed = std::stoull(val);
        else if (key == "jobs")
            cfg.jobs = std::max(1, std::stoi(val));
        else if (key == "degree_cap")
            cfg.caps.degree_cap = std::stoll(val);
        else
            raise(Errc::ParseError, "unknown config key: " + key);
    }
    if (cfg.fields.empty() || (cfg.maps.empty() && cfg.op != "none"))
        raise(Errc::ParseError, "config needs at least one field and one map");
    if (cfg.op != "classify" && cfg.op != "delta" && cfg.op != "stats")
        raise(Errc::ParseError, "op must be classify, delta, or stats");
    if (cfg.op == "stats" && cfg.f.empty()) raise(Errc::ParseError, "op=stats needs f=");
    return cfg;
}

namespace {

struct Row {
    std::string field, map, alpha;
    int n;
};

constexpr const char* kHeader =
    "field,map,alpha,alpha_ext,op,n,c_num,c_den,critical,family,delta,M,N,A_num,A_den,error";

std::string row_id(const SweepConfig& cfg, const Row& row) {
    return row.field + "|" + row.map + "|" + row.alpha + "|" + std::to_string(cfg.alpha_ext) + "|" + cfg.op +
           "|" + std::to_string(row.n);
}

std::string compute_row(const SweepConfig& cfg, const Row& row) {
    std::ostringstream os;
    os << row.field << "," << row.map << "," << row.alpha << "," << cfg.alpha_ext << "," << cfg.op << ","
       << row.n << ",";
    try {
        auto base = parse_field_spec(row.field, cfg.seed);
        RatMap R = parse_map(row.map, base);
        auto actx = cfg.alpha_ext == 1 ? base : extension(base, cfg.alpha_ext, cfg.seed);
        FElem alpha = parse_element(row.alpha, actx);
        if (cfg.op == "classify") {
            CritReport rep = classify(R, alpha, cfg.caps);
            if (rep.outside_scope) {
                os << ",,," << family_name(rep.family) << ",,,,,,OutsideScope";
            } else {
                os << boost::multiprecision::numerator(rep.c) << ","
                   << boost::multiprecision::denominator(rep.c) << "," << (rep.critical ? "true" : "false")
                   << "," << family_name(rep.family) << ",,,,,,";
            }
        } else if (cfg.op == "delta") {
            int d = delta_oracle(R, alpha, row.n, cfg.caps);
            os << ",,,," << d << ",,,,,";
        } else { // stats
            Poly f = parse_poly(cfg.f, base);
            StatRecord rec = stats_at(f, R, row.n, cfg.caps);
            os << ",,,," << rec.delta << "," << rec.M << "," << rec.Ncount << ","
               << boost::multiprecision::numerator(rec.A) << ","
               << boost::multiprecision::denominator(rec.A) << ",";
        }
    } catch (const Error& err) {
        os << ",,,,,,,,," << errc_name(err.code());
    }
    return os.str();
}

} // namespace

SweepResult run_sweep(const SweepConfig& cfg, const std::string& out_path) {
    // expand the cartesian product
    std::vector<Row> rows;
    for (const auto& field : cfg.fields) {
        std::vector<std::string> alphas = cfg.alphas;
        if (alphas.size() == 1 && alphas[0] == "all") {
            auto base = parse_field_spec(field, cfg.seed);
            auto actx = cfg.alpha_ext == 1 ? base : extension(base, cfg.alpha_ext, cfg.seed);
            alphas.clear();
            for (const auto& x : actx->all_elements()) alphas.push_back(format_element(x));
        }
        for (const auto& map : cfg.maps)
            for (const auto& alpha : alphas)
                for (int n : cfg.ns) rows.push_back(Row{field, map, alpha, n});
    }

    std::set<std::string> done;
    const std::string journal_path = out_path + ".journal";
    {
        std::ifstream jin(journal_path);
        std::string line;
        while (std::getline(jin, line))
            if (!line.empty()) done.insert(line);
    }

    bool fresh = done.empty();
    std::ofstream out(out_path, fresh ? std::ios::trunc : std::ios::app);
    std::ofstream journal(journal_path, std::ios::app);
    if (!out || !journal) raise(Errc::ParseError, "cannot open output files at " + out_path);
    if (fresh) out << kHeader << "\n";

    SweepResult result;
    std::vector<int> pending;
    for (size_t i = 0; i < rows.size(); ++i) {
        if (done.count(row_id(cfg, rows[i])))
            ++result.rows_skipped;
        else
            pending.push_back(int(i));
    }

    std::mutex mu;
    std::condition_variable cv;
    std::map<int, std::string> ready; // pending-index -> csv line
    std::atomic<int> next_claim{0};

    auto worker = [&] {
        for (;;) {
            int k = next_claim.fetch_add(1);
            if (k >= int(pending.size())) return;
            std::string line = compute_row(cfg, rows[size_t(pending[size_t(k)])]);
            std::lock_guard<std::mutex> lock(mu);
            ready.emplace(k, std::move(line));
            cv.notify_all();
        }
    };

    std::vector<std::thread> threads;
    const int jobs = std::min<int>(cfg.jobs, std::max<int>(1, int(pending.size())));
    threads.reserve(size_t(jobs));
    for (int t = 0; t < jobs; ++t) threads.emplace_back(worker);

    // single writer keeps output and journal in row order, one row at a time
    for (int k = 0; k < int(pending.size()); ++k) {
        std::unique_lock<std::mutex> lock(mu);
        cv.wait(lock, [&] { return ready.count(k) > 0; });
        std::string line = std::move(ready.at(k));
        ready.erase(k);
        lock.unlock();
        // the error column is the final CSV field
        auto last_comma = line.find_last_of(',');
        if (last_comma != std::string::npos && last_comma + 1 < line.size()) ++result.rows_failed;
        out << line << "\n";
        out.flush();
        journal << row_id(cfg, rows[size_t(pending[size_t(k)])]) << "\n";
        journal.flush();
        ++result.rows_written;
    }
    for (auto& t : threads) t.join();
    return result;
}

} // namespace fqdyn
