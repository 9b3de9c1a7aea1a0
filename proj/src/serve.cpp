#include "crgeo/serve.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>

#include "crgeo/coords.hpp"
#include "crgeo/plot.hpp"
#include "crgeo/rep.hpp"
#include "crgeo/verifier.hpp"

// After Eigen: httplib pulls in system headers whose macros clash with it.
#include "httplib.h"
#include "json.hpp"

namespace crgeo {

using json = nlohmann::json;

namespace {

struct BadRequest : std::runtime_error {
  using std::runtime_error::runtime_error;
};

json cnum(cplx z) { return json::array({z.real(), z.imag()}); }

json finite_or_string(double v) { return std::isfinite(v) ? json(v) : json(format_double(v)); }

double number(const std::map<std::string, std::string>& q, const std::string& key, double dflt) {
  auto it = q.find(key);
  if (it == q.end()) return dflt;
  size_t used = 0;
  double v = 0;
  try {
    v = std::stod(it->second, &used);
  } catch (const std::exception&) {
    throw BadRequest("parameter '" + key + "' is not a number");
  }
  if (used != it->second.size() || !std::isfinite(v)) throw BadRequest("parameter '" + key + "' is not a number");
  return v;
}

int integer(const std::map<std::string, std::string>& q, const std::string& key, int dflt) {
  double v = number(q, key, dflt);
  if (v != std::floor(v) || std::abs(v) > 1e7) throw BadRequest("parameter '" + key + "' is not an integer");
  return static_cast<int>(v);
}

json rep_summary(double s) {
  RepInstance r = build_rep(s);
  double x = r.x;
  json j;
  j["s"] = s;
  j["x"] = x;
  j["A"] = 2 * (2 * x - 3) / (x - 3);
  json warnings = r.warnings;
  try {
    j["u"] = finite_or_string(build_normalization(NormalizationKind::N3_AxisUnitRadius, r).u);
  } catch (const Error& e) {
    // The N3 chart does not exist at the parabolic endpoint.
    j["u"] = nullptr;
    warnings.push_back(e.what());
  }
  j["classification"] = rep_class_name(r.cls);
  j["certified"] = r.certified;
  j["beta"] = cnum(r.beta);
  j["e"] = cnum(r.e);
  j["lambda"] = cnum(r.lambda);
  j["a"] = cnum(r.a);
  j["b"] = cnum(r.b);
  j["c"] = cnum(r.c);
  j["d"] = cnum(r.d);
  j["k"] = r.k;
  j["r"] = finite_or_string(r.r);
  j["warnings"] = warnings;
  return j;
}

SweepConfig sweep_config(const std::map<std::string, std::string>& q) {
  SweepConfig c;
  c.s0 = number(q, "s0", c.s0);
  c.s1 = number(q, "s1", c.s1);
  c.n = integer(q, "n", c.n);
  c.n_curve = integer(q, "n_curve", c.n_curve);
  c.n_arcs = integer(q, "n_arcs", c.n_arcs);
  c.n_pts = integer(q, "n_pts", c.n_pts);
  c.n_affiliates = integer(q, "n_affiliates", c.n_affiliates);
  c.seed = static_cast<std::uint64_t>(integer(q, "seed", static_cast<int>(c.seed)));
  if (c.n > 4096) throw BadRequest("at most 4096 samples per request");
  try {
    c.validate();
  } catch (const Error& e) {
    throw BadRequest(e.what());
  }
  return c;
}

json verify_json(const std::string& lemma, const SweepConfig& c) {
  if (lemma == "all") return sweep(c).to_json();
  Lemma l;
  try {
    l = lemma_from_name(lemma);
  } catch (const Error& e) {
    throw BadRequest(e.what());
  }
  return verify(l, c).to_json();
}

ApiResponse error_response(int status, const std::string& msg, const std::string& kind = "") {
  json j = {{"error", msg}};
  if (!kind.empty()) j["kind"] = kind;
  return {status, "application/json", j.dump(2)};
}

}  // namespace

ApiResponse handle_api(const std::string& path, const std::map<std::string, std::string>& query,
                       const std::string& body) {
  try {
    if (path == "/api/rep") {
      if (!query.count("s")) throw BadRequest("missing parameter 's'");
      double s = number(query, "s", 0);
      if (s < 0 || s > kSBar) throw BadRequest("s must lie in [0, s-bar]");
      return {200, "application/json", rep_summary(s).dump(2)};
    }
    if (path == "/api/figure") {
      json spec = json::object();
      std::string text = body;
      if (text.empty() && query.count("spec")) text = query.at("spec");
      if (!text.empty()) {
        try {
          spec = json::parse(text);
        } catch (const json::exception& e) {
          throw BadRequest(std::string("figure spec is not JSON: ") + e.what());
        }
      }
      FigureSpec f;
      try {
        f = FigureSpec::from_json(spec);
      } catch (const Error& e) {
        throw BadRequest(e.what());
      }
      return {200, "application/json", build_figure(f).to_json().dump()};
    }
    if (path == "/api/verify") {
      auto it = query.find("lemma");
      std::string lemma = it == query.end() ? "all" : it->second;
      return {200, "application/json", verify_json(lemma, sweep_config(query)).dump(2)};
    }
    return error_response(404, "no route " + path);
  } catch (const BadRequest& e) {
    return error_response(400, e.what());
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::InvalidArgument) return error_response(400, e.what());
    return error_response(500, e.what(), error_kind_name(e.kind()));
  } catch (const std::exception& e) {
    return error_response(500, e.what(), "exception");
  }
}

int serve(int port, const std::string& assets_dir, const std::string& host) {
  httplib::Server srv;
  auto to_map = [](const httplib::Request& req) {
    std::map<std::string, std::string> q;
    for (const auto& [k, v] : req.params) q[k] = v;
    return q;
  };
  auto reply = [](httplib::Response& res, const ApiResponse& r) {
    res.status = r.status;
    res.set_content(r.body, r.content_type);
  };
  for (const char* route : {"/api/rep", "/api/figure", "/api/verify"}) {
    std::string path = route;
    auto h = [=](const httplib::Request& req, httplib::Response& res) {
      auto q = to_map(req);
      // Sweeps can stream one NDJSON progress line per lemma.
      if (path == "/api/verify" && q.count("stream") && q.at("stream") == "1") {
        try {
          sweep_config(q);
        } catch (const BadRequest& e) {
          return reply(res, error_response(400, e.what()));
        }
        res.set_chunked_content_provider("application/x-ndjson", [q](size_t, httplib::DataSink& sink) {
          std::string lemma = q.count("lemma") ? q.at("lemma") : "all";
          std::vector<std::string> todo =
              lemma == "all" ? std::vector<std::string>{"TL1", "TL2", "TL3", "pictures"} : std::vector<std::string>{lemma};
          json reports = json::array();
          for (size_t k = 0; k < todo.size(); ++k) {
            auto p = q;
            p["lemma"] = todo[k];
            ApiResponse r = handle_api("/api/verify", p, "");
            json line = {{"event", "progress"}, {"lemma", todo[k]}, {"done", k + 1}, {"total", todo.size()},
                         {"status", r.status}};
            std::string s = line.dump() + "\n";
            sink.write(s.data(), s.size());
            reports.push_back(json::parse(r.body));
          }
          std::string s = json({{"event", "report"}, {"reports", reports}}).dump() + "\n";
          sink.write(s.data(), s.size());
          sink.done();
          return true;
        });
        return;
      }
      reply(res, handle_api(path, q, req.body));
    };
    srv.Get(route, h);
    srv.Post(route, h);
  }
  auto unknown = [reply](const httplib::Request& req, httplib::Response& res) { reply(res, handle_api(req.path, {}, "")); };
  srv.Get(R"(/api/.*)", unknown);
  srv.Post(R"(/api/.*)", unknown);
  if (!assets_dir.empty()) {
    if (!std::filesystem::is_directory(assets_dir)) {
      std::fprintf(stderr, "assets directory %s not found\n", assets_dir.c_str());
      return 2;
    }
    srv.set_mount_point("/", assets_dir);
  }
  if (!srv.bind_to_port(host, port)) {
    std::fprintf(stderr, "cannot bind %s:%d\n", host.c_str(), port);
    return 1;
  }
  std::fprintf(stderr, "listening on http://%s:%d\n", host.c_str(), port);
  return srv.listen_after_bind() ? 0 : 1;
}

}  // namespace crgeo
