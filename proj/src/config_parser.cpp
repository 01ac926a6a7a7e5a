#include "lobsim/config_parser.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace lobsim {

namespace {

void require(bool ok, const std::string& key, const std::string& what) {
  if (!ok) throw ConfigError(key + ": " + what, key);
}

bool valid_range(const Range& r) {
  return std::isfinite(r.lo) && std::isfinite(r.hi) && r.lo <= r.hi;
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double to_double(std::string_view s) {
  const std::string tmp(trim(s));
  if (tmp.empty()) throw std::invalid_argument("empty number");
  std::size_t used = 0;
  const double v = std::stod(tmp, &used);
  if (used != tmp.size()) throw std::invalid_argument("trailing characters in '" + tmp + "'");
  return v;
}

std::int64_t to_int(std::string_view s) {
  const std::string_view t = trim(s);
  std::int64_t v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size()) {
    throw std::invalid_argument("expected an integer, got '" + std::string(t) + "'");
  }
  return v;
}

std::size_t to_count(std::string_view s) {
  const std::int64_t v = to_int(s);
  if (v < 0) throw std::invalid_argument("expected a non-negative integer");
  return static_cast<std::size_t>(v);
}

bool to_bool(std::string_view s) {
  const std::string_view t = trim(s);
  if (t == "true" || t == "1" || t == "yes") return true;
  if (t == "false" || t == "0" || t == "no") return false;
  throw std::invalid_argument("expected true or false, got '" + std::string(t) + "'");
}

std::pair<std::string_view, std::string_view> split_range(std::string_view s) {
  const auto dots = s.find("..");
  if (dots == std::string_view::npos) {
    throw std::invalid_argument("expected a range lo..hi, got '" + std::string(trim(s)) + "'");
  }
  return {s.substr(0, dots), s.substr(dots + 2)};
}

Range to_range(std::string_view s) {
  const auto [lo, hi] = split_range(s);
  return {to_double(lo), to_double(hi)};
}

IntRange to_int_range(std::string_view s) {
  const auto [lo, hi] = split_range(s);
  return {to_int(lo), to_int(hi)};
}

TechnicalGroupSpec to_group(std::string_view s) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto comma = s.find(',', start);
    parts.push_back(s.substr(start, comma == std::string_view::npos ? std::string_view::npos
                                                                   : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  if (parts.size() != 3) throw std::invalid_argument("expected slow,fast,count");
  return {to_count(parts[0]), to_count(parts[1]), to_count(parts[2])};
}

using Setter = std::function<void(SimConfig&, std::string_view)>;

const std::map<std::string, Setter, std::less<>>& setters() {
  static const std::map<std::string, Setter, std::less<>> table = {
      {"n_fundamental", [](SimConfig& c, std::string_view v) { c.n_fundamental = to_count(v); }},
      {"T", [](SimConfig& c, std::string_view v) { c.steps = to_int(v); }},
      {"seed", [](SimConfig& c, std::string_view v) {
         c.seed = static_cast<std::uint64_t>(to_int(v));
       }},
      {"tick", [](SimConfig& c, std::string_view v) { c.tick = to_double(v); }},
      {"p_active", [](SimConfig& c, std::string_view v) { c.p_active = to_double(v); }},
      {"p_f", [](SimConfig& c, std::string_view v) { c.p_f = to_range(v); }},
      {"chi_market", [](SimConfig& c, std::string_view v) { c.chi_market = to_range(v); }},
      {"chi_opinion", [](SimConfig& c, std::string_view v) { c.chi_opinion = to_range(v); }},
      {"sigma_dpf", [](SimConfig& c, std::string_view v) { c.sigma_dpf = to_double(v); }},
      {"lambda_limit", [](SimConfig& c, std::string_view v) { c.lambda_limit = to_double(v); }},
      {"mu_news", [](SimConfig& c, std::string_view v) { c.mu_news = to_double(v); }},
      {"sigma_news", [](SimConfig& c, std::string_view v) { c.sigma_news = to_double(v); }},
      {"f_news", [](SimConfig& c, std::string_view v) { c.f_news = to_double(v); }},
      {"gamma", [](SimConfig& c, std::string_view v) { c.gamma = to_double(v); }},
      {"t_wait", [](SimConfig& c, std::string_view v) { c.t_wait = to_int_range(v); }},
      {"symmetric_profit_taking",
       [](SimConfig& c, std::string_view v) { c.symmetric_profit_taking = to_bool(v); }},
      {"warmup_steps", [](SimConfig& c, std::string_view v) { c.warmup_steps = to_int(v); }},
      {"discard_warmup", [](SimConfig& c, std::string_view v) { c.discard_warmup = to_bool(v); }},
      {"initial_price", [](SimConfig& c, std::string_view v) { c.initial_price = to_double(v); }},
      {"liquidity_failure",
       [](SimConfig& c, std::string_view v) {
         const auto t = trim(v);
         if (t == "abort") {
           c.liquidity_failure = LiquidityPolicy::abort;
         } else if (t == "skip") {
           c.liquidity_failure = LiquidityPolicy::skip;
         } else {
           throw std::invalid_argument("expected abort or skip");
         }
       }},
      {"max_resting_age", [](SimConfig& c, std::string_view v) { c.max_resting_age = to_int(v); }},
  };
  return table;
}

// Shortest text that reads back to the same double.
std::string shortest(double v) {
  char buf[32];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

}  // namespace

void SimConfig::validate() const {
  require(steps >= 1, "T", "must be at least 1");
  require(std::isfinite(tick) && tick > 0.0, "tick", "must be positive");
  require(p_active >= 0.0 && p_active <= 1.0, "p_active", "must lie in [0, 1]");
  require(valid_range(p_f) && p_f.lo > 0.0, "p_f", "needs 0 < lo <= hi");
  require(valid_range(chi_market) && chi_market.lo > 0.0 && chi_market.hi < 1.0, "chi_market",
          "needs 0 < lo <= hi < 1");
  require(valid_range(chi_opinion) && chi_opinion.lo > 0.0 && chi_opinion.hi < 1.0,
          "chi_opinion", "needs 0 < lo <= hi < 1");
  require(std::isfinite(sigma_dpf) && sigma_dpf >= 0.0, "sigma_dpf", "must be >= 0");
  require(std::isfinite(lambda_limit) && lambda_limit > 0.0, "lambda_limit", "must be positive");
  require(std::isfinite(mu_news), "mu_news", "must be finite");
  require(std::isfinite(sigma_news) && sigma_news >= 0.0, "sigma_news", "must be >= 0");
  require(std::isfinite(f_news) && f_news >= 1.0, "f_news", "must be >= 1");
  require(std::isfinite(gamma) && gamma > 0.0, "gamma", "must be positive");
  require(t_wait.lo >= 0 && t_wait.lo <= t_wait.hi, "t_wait", "needs 0 <= lo <= hi");
  require(std::isfinite(initial_price) && initial_price > 0.0, "initial_price",
          "must be positive");
  require(initial_price / tick >= 1.0, "initial_price", "must be at least one tick");
  require(!warmup_steps || *warmup_steps >= 0, "warmup_steps", "must be >= 0");
  require(max_resting_age >= 0, "max_resting_age", "must be >= 0 (0 disables expiry)");
  for (const auto& g : groups) {
    require(g.fast_window >= 1 && g.fast_window < g.slow_window, "group",
            "windows need 1 <= fast < slow");
  }
  require(groups.empty() || steps > static_cast<std::int64_t>(max_slow_window()), "T",
          "must exceed the slowest moving-average window (" +
              std::to_string(max_slow_window()) + ")");
}

std::size_t SimConfig::max_slow_window() const {
  std::size_t w = 0;
  for (const auto& g : groups) w = std::max(w, g.slow_window);
  return w;
}

std::size_t SimConfig::n_technical() const {
  std::size_t n = 0;
  for (const auto& g : groups) n += g.count;
  return n;
}

std::int64_t SimConfig::effective_warmup() const {
  if (warmup_steps) return *warmup_steps;
  return 2 * static_cast<std::int64_t>(max_slow_window());
}

SimConfig without_technicals(SimConfig config) {
  config.warmup_steps = config.effective_warmup();
  config.groups.clear();
  return config;
}

SimConfig with_technical_ratio(SimConfig config, double ratio) {
  if (!(ratio >= 0.0) || !std::isfinite(ratio)) {
    throw ConfigError("tech_fraction: ratio must be >= 0", "tech_fraction");
  }
  if (config.groups.empty()) {
    throw ConfigError("tech_fraction: no technical groups to rescale", "tech_fraction");
  }
  config.warmup_steps = config.effective_warmup();
  const auto total = static_cast<std::size_t>(
      std::llround(ratio * static_cast<double>(config.n_fundamental)));
  const std::size_t k = config.groups.size();
  for (std::size_t g = 0; g < k; ++g) {
    config.groups[g].count = total / k + (g < total % k ? 1 : 0);
  }
  if (total == 0) config.groups.clear();
  return config;
}

SimConfig parse_config_text(std::string_view text) {
  SimConfig config;
  std::set<std::string, std::less<>> seen;
  bool groups_given = false;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line =
        text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;

    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'", "",
                        line_no);
    }
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));
    if (key.empty()) {
      throw ConfigError("line " + std::to_string(line_no) + ": missing key", "", line_no);
    }
    if (value.empty()) {
      throw ConfigError("line " + std::to_string(line_no) + ": missing value for " + key, key,
                        line_no);
    }

    try {
      if (key == "group") {
        if (!groups_given) config.groups.clear();
        groups_given = true;
        if (value != "none") config.groups.push_back(to_group(value));
        continue;
      }
      const auto it = setters().find(key);
      if (it == setters().end()) {
        throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" + key + "'", key,
                          line_no);
      }
      if (!seen.insert(key).second) {
        throw ConfigError("line " + std::to_string(line_no) + ": '" + key + "' set twice", key,
                          line_no);
      }
      it->second(config, value);
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      throw ConfigError("line " + std::to_string(line_no) + ": " + key + ": " + e.what(), key,
                        line_no);
    }
  }
  config.validate();
  return config;
}

SimConfig parse_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config_text(text.str());
}

std::string format_config(const SimConfig& c) {
  std::ostringstream out;
  out << "n_fundamental = " << c.n_fundamental << '\n';
  if (c.groups.empty()) out << "group = none\n";
  for (const auto& g : c.groups) {
    out << "group = " << g.slow_window << ',' << g.fast_window << ',' << g.count << '\n';
  }
  out << "T = " << c.steps << '\n'
      << "seed = " << static_cast<std::int64_t>(c.seed) << '\n'
      << "tick = " << shortest(c.tick) << '\n'
      << "p_active = " << shortest(c.p_active) << '\n'
      << "p_f = " << shortest(c.p_f.lo) << ".." << shortest(c.p_f.hi) << '\n'
      << "chi_market = " << shortest(c.chi_market.lo) << ".." << shortest(c.chi_market.hi) << '\n'
      << "chi_opinion = " << shortest(c.chi_opinion.lo) << ".." << shortest(c.chi_opinion.hi) << '\n'
      << "sigma_dpf = " << shortest(c.sigma_dpf) << '\n'
      << "lambda_limit = " << shortest(c.lambda_limit) << '\n'
      << "mu_news = " << shortest(c.mu_news) << '\n'
      << "sigma_news = " << shortest(c.sigma_news) << '\n'
      << "f_news = " << shortest(c.f_news) << '\n'
      << "gamma = " << shortest(c.gamma) << '\n'
      << "t_wait = " << c.t_wait.lo << ".." << c.t_wait.hi << '\n'
      << "symmetric_profit_taking = " << (c.symmetric_profit_taking ? "true" : "false") << '\n'
      << "warmup_steps = " << c.effective_warmup() << '\n'
      << "discard_warmup = " << (c.discard_warmup ? "true" : "false") << '\n'
      << "initial_price = " << shortest(c.initial_price) << '\n'
      << "liquidity_failure = "
      << (c.liquidity_failure == LiquidityPolicy::abort ? "abort" : "skip") << '\n'
      << "max_resting_age = " << c.max_resting_age << '\n';
  return out.str();
}

}  // namespace lobsim
