#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "crgeo/plot.hpp"
#include "crgeo/serve.hpp"
#include "crgeo/verifier.hpp"

#include "CLI11.hpp"

using namespace crgeo;

namespace {

void write_file(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorKind::InvalidArgument, "cannot write " + path);
  f << text;
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorKind::InvalidArgument, "cannot read " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void summarize(const LemmaReport& r) {
  int failed = 0;
  for (const auto& s : r.samples) failed += s.pass ? 0 : 1;
  double worst = std::numeric_limits<double>::infinity();
  std::string worst_name;
  // Exact-count checks always sit at margin 0; report the tightest inequality.
  for (const auto& smp : r.samples)
    for (const auto& c : smp.checks)
      if (c.rel != "==" && c.margin < worst) {
        worst = c.margin;
        worst_name = c.name;
      }
  std::fprintf(stderr, "%-9s %s  samples=%zu failed=%d  tightest=%s (%s)%s\n", r.lemma.c_str(),
               r.verdict ? "PASS" : "FAIL", r.samples.size(), failed, worst_name.c_str(), format_double(worst).c_str(),
               r.certified ? "" : "  [uncertified range]");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sampling certificates and figures for the complex hyperbolic triangle group construction"};
  app.require_subcommand(1);

  // verify
  auto* v = app.add_subcommand("verify", "Run lemma checks over a parameter sweep");
  std::string lemma = "all", out, csv_out;
  SweepConfig cfg;
  v->add_option("--lemma", lemma, "TL1, TL2, TL3, pictures or all")
      ->check(CLI::IsMember({"TL1", "TL2", "TL3", "pictures", "all"}));
  v->add_option("--s0", cfg.s0, "Sweep start");
  v->add_option("--s1", cfg.s1, "Sweep end");
  v->add_option("--n", cfg.n, "Number of samples");
  v->add_option("--n-curve", cfg.n_curve, "Samples per closed curve");
  v->add_option("--n-arcs", cfg.n_arcs, "Cone arcs per disk");
  v->add_option("--n-pts", cfg.n_pts, "Samples per cone arc");
  v->add_option("--n-affiliates", cfg.n_affiliates, "Random affiliates per sample");
  v->add_option("--seed", cfg.seed, "Seed for the random checks");
  v->add_option("--threads", cfg.threads, "Worker threads (0: all cores)");
  v->add_option("--out", out, "JSON report path (default stdout)");
  v->add_option("--csv", csv_out, "CSV report path");

  // plot
  auto* p = app.add_subcommand("plot", "Render a figure");
  std::string view = "Elevation", layers, spec_file, svg_out, fig_csv, fig_json, norm = "N1";
  double s = kSLow;
  double theta = std::numeric_limits<double>::quiet_NaN();
  int n_curve = 2048;
  p->add_option("--view", view, "Elevation, ElevationAffiliate, HeisProjection, EtaDisk, EtaHalfPlane, ArgArgTorus");
  p->add_option("--s", s, "Parameter");
  p->add_option("--layers", layers, "Comma-separated layers to draw, 'all' or 'none'");
  p->add_option("--theta", theta, "Affiliate base point parameter on C1");
  p->add_option("--normalization", norm, "Chart for HeisProjection: N1, N2 or N3");
  p->add_option("--n-curve", n_curve, "Samples per closed curve");
  p->add_option("--spec", spec_file, "FigureSpec JSON file (overrides the other options)");
  p->add_option("--out", svg_out, "SVG path (default stdout)");
  p->add_option("--csv", fig_csv, "CSV export path");
  p->add_option("--json", fig_json, "Layered polylines as JSON");

  // serve
  auto* sv = app.add_subcommand("serve", "Serve the JSON API and the explorer assets");
  int port = 8080;
  std::string host = "127.0.0.1";
  const char* env_assets = std::getenv("CRGEO_ASSETS");
  std::string assets = env_assets ? env_assets : "";
  sv->add_option("--port", port, "Port");
  sv->add_option("--host", host, "Bind address");
  sv->add_option("--assets", assets, "Static directory (default $CRGEO_ASSETS)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*v) {
      cfg.validate();
      bool pass = false;
      std::string json, csv;
      if (lemma == "all") {
        SweepReport r = sweep(cfg);
        for (const auto& l : r.lemmas) summarize(l);
        pass = r.verdict;
        json = r.json();
        csv = r.csv();
      } else {
        LemmaReport r = verify(lemma_from_name(lemma), cfg);
        summarize(r);
        pass = r.verdict;
        json = r.json();
        csv = r.csv();
      }
      write_file(out, json + "\n");
      if (!csv_out.empty()) write_file(csv_out, csv);
      std::fprintf(stderr, "verdict: %s\n", pass ? "PASS" : "FAIL");
      return pass ? 0 : 1;
    }
    if (*p) {
      FigureSpec spec;
      if (!spec_file.empty()) {
        spec = FigureSpec::from_json(nlohmann::json::parse(read_file(spec_file)));
      } else {
        spec.view = view_from_name(view);
        spec.s = s;
        spec.normalization = norm;
        spec.n_curve = n_curve;
        if (!std::isnan(theta)) spec.affiliate_theta = theta;
        if (!layers.empty() && layers != "all") {
          for (const auto& l : view_layers(spec.view)) spec.layers[l] = false;
          std::stringstream ss(layers == "none" ? "" : layers);
          std::string item;
          while (std::getline(ss, item, ','))
            if (!item.empty()) spec.layers[item] = true;
        }
        spec.validate();
      }
      Figure fig = build_figure(spec);
      write_file(svg_out, render_svg(fig));
      if (!fig_csv.empty()) write_file(fig_csv, export_csv(fig));
      if (!fig_json.empty()) write_file(fig_json, fig.to_json().dump() + "\n");
      if (!fig.notice.empty()) std::fprintf(stderr, "note: %s\n", fig.notice.c_str());
      return 0;
    }
    if (*sv) return serve(port, assets, host);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "crgeo: %s\n", e.what());
    return 2;
  }
  return 0;
}
