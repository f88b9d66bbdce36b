#include "expectq/pipeline.hpp"

#include "expectq/csv.hpp"
#include "expectq/error.hpp"

#include <fmt/format.h>

#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

namespace expectq {

namespace fs = std::filesystem;

namespace {

fs::path out_file(const RunConfig& c, std::string_view name) { return c.output_dir / name; }

fs::path pick(const fs::path& configured, const fs::path& fallback) {
    return configured.empty() ? fallback : configured;
}

void require_file(const fs::path& path, std::string_view what) {
    if (path.empty()) throw Error(Errc::ConfigError, fmt::format("no {} configured", what));
    if (!fs::exists(path)) throw Error(Errc::ConfigError, fmt::format("{} not found: {}", what, path.string()));
}

std::ofstream create(const fs::path& path) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(Errc::Io, fmt::format("cannot write {}", path.string()));
    return out;
}

std::ifstream open(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::Io, fmt::format("cannot open {}", path.string()));
    return in;
}

MaskRules mask_rules(const RunConfig& c) {
    MaskRules r;
    r.year_min = c.mask_year_min;
    r.year_max = c.mask_year_max;
    r.mask_token = c.mask_token;
    if (!c.paths.entity_lexicon.empty()) {
        require_file(c.paths.entity_lexicon, "entity lexicon");
        r.entity_lexicon = read_word_list(c.paths.entity_lexicon);
    }
    r.validate();
    return r;
}

// Normalized transcripts from the ingest stage when present, else the raw file.
fs::path transcript_source(const RunConfig& c) {
    const auto normalized = out_file(c, "transcripts.jsonl");
    if (fs::exists(normalized)) return normalized;
    require_file(c.paths.transcripts, "transcripts file");
    return c.paths.transcripts;
}

const std::vector<std::string>& default_winsor_columns() {
    static const std::vector<std::string> cols{
        "capital_expenditure_pct", "physical_investment", "intangible_investment", "total_investment", "rd_pct",
        "total_q", "total_q_c0", "total_q_c1", "total_q_c5", "total_cash_flow", "leverage", "size", "z_score",
        "profitability", "sales_growth"};
    return cols;
}

nlohmann::ordered_json winsor_json(const WinsorReport& report) {
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    for (const auto& [k, b] : report) j[k] = {{"lower", b.lower}, {"upper", b.upper}, {"clamped", b.clamped}};
    return j;
}

WinsorReport apply_winsor(const RunConfig& c, Panel& panel) {
    std::vector<std::string> cols;
    for (const auto& name : c.winsor_columns.empty() ? default_winsor_columns() : c.winsor_columns)
        if (panel.has(name)) cols.push_back(name);
        else if (!c.winsor_columns.empty())
            throw Error(Errc::ConfigError, fmt::format("winsor column '{}' not in panel", name));
    return winsorize(panel, cols, c.winsor_tail, c.winsor_mode);
}

// ---------------------------------------------------------------------------

StageResult ingest(const RunConfig& c) {
    require_file(c.paths.transcripts, "transcripts file");
    Manifest m(Stage::Ingest, c);
    m.add_input("transcripts", c.paths.transcripts);
    const auto corpus = ingest_transcripts_file(c.paths.transcripts);

    StageResult r;
    const auto path = out_file(c, "transcripts.jsonl");
    {
        auto out = create(path);
        write_transcripts(out, corpus);
    }
    r.outputs.push_back(path);

    if (!c.paths.positive_words.empty() || !c.paths.negative_words.empty()) {
        require_file(c.paths.positive_words, "positive word list");
        require_file(c.paths.negative_words, "negative word list");
        m.add_input("positive_words", c.paths.positive_words);
        m.add_input("negative_words", c.paths.negative_words);
        const auto lex = SentimentLexicon::from_files(c.paths.positive_words, c.paths.negative_words);
        const auto spath = out_file(c, "sentiment.csv");
        auto out = create(spath);
        write_csv_row(out, std::vector<std::string>{"call_id", "sentiment"});
        for (const auto& t : corpus)
            write_csv_row(out, std::vector<std::string>{t.call_id, format_number(lm_sentiment(t.text, lex))});
        r.outputs.push_back(spath);
    }
    m.set("transcripts", corpus.size());
    for (const auto& o : r.outputs) m.add_output(o);
    m.write();
    r.summary = fmt::format("ingested {} transcripts", corpus.size());
    return r;
}

StageResult mask(const RunConfig& c) {
    const auto src = transcript_source(c);
    Manifest m(Stage::Mask, c);
    m.add_input("transcripts", src);
    const auto rules = mask_rules(c);
    if (!c.paths.entity_lexicon.empty()) m.add_input("entity_lexicon", c.paths.entity_lexicon);
    auto corpus = ingest_transcripts_file(src);
    for (auto& t : corpus) t.text = mask_identity(t.text, rules);

    const auto path = out_file(c, "masked_transcripts.jsonl");
    {
        auto out = create(path);
        write_transcripts(out, corpus);
    }
    m.set("year_min", rules.year_min);
    m.set("year_max", rules.year_max);
    m.set("mask_token", rules.mask_token);
    m.set("entities", rules.entity_lexicon.size());
    m.add_output(path);
    m.write();
    return {0, {path}, fmt::format("masked {} transcripts", corpus.size())};
}

std::unordered_set<std::string> stopword_set(const RunConfig& c, Manifest& m) {
    if (c.paths.stopwords.empty()) return {};
    require_file(c.paths.stopwords, "stopword list");
    m.add_input("stopwords", c.paths.stopwords);
    const auto words = read_word_list(c.paths.stopwords);
    return {words.begin(), words.end()};
}

StageResult score(const RunConfig& c) {
    const auto src = transcript_source(c);
    Manifest m(Stage::Score, c);
    m.add_input("transcripts", src);
    if (c.provider.backend == ProviderConfig::Backend::Stub) {
        require_file(c.provider.stub_rules, "stub rules");
        m.add_input("stub_rules", c.provider.stub_rules);
    }
    const auto corpus = ingest_transcripts_file(src);

    ScoreOptions opts;
    opts.max_words = c.max_words;
    opts.on_parse_error = c.on_parse_error;
    if (c.mask_before_scoring) opts.mask = mask_rules(c);

    ResponseCache cache(c.provider.cache_path);
    QueryEngine engine(c.provider, make_provider(c.provider), cache);
    const auto run = score_corpus(corpus, c.policies, engine, opts);

    StageResult r;
    const auto calls_path = out_file(c, "call_scores.csv");
    const auto chunks_path = out_file(c, "chunk_scores.csv");
    {
        auto out = create(calls_path);
        write_call_scores_csv(out, run.calls);
    }
    {
        auto out = create(chunks_path);
        write_chunk_scores_csv(out, run.chunks);
    }
    r.outputs = {calls_path, chunks_path};

    // Bigram tables over the explanations of extreme investment answers.
    const auto stop = stopword_set(c, m);
    std::vector<std::string> low, high;
    for (const auto& ch : run.chunks) {
        if (ch.score.policy != PolicyKind::Investment || ch.error) continue;
        if (ch.score.score <= -1.0) low.push_back(ch.score.explanation);
        if (ch.score.score >= 1.0) high.push_back(ch.score.explanation);
    }
    for (const auto& [name, texts] : {std::pair{"bigrams_low.csv", &low}, std::pair{"bigrams_high.csv", &high}}) {
        const auto path = out_file(c, name);
        auto out = create(path);
        write_bigrams_csv(out, top_bigrams(*texts, c.bigram_top, stop, default_time_words()));
        r.outputs.push_back(path);
    }

    nlohmann::ordered_json provider;
    provider["backend"] = c.provider.backend == ProviderConfig::Backend::Stub ? "stub" : "remote";
    provider["endpoint"] = c.provider.endpoint;
    provider["model"] = c.provider.model_name;
    provider["temperature"] = c.provider.temperature;
    provider["max_attempts"] = c.provider.max_attempts;
    m.set("provider", provider);
    nlohmann::ordered_json policies = nlohmann::ordered_json::array();
    for (auto p : c.policies) policies.push_back(std::string(to_string(p)));
    m.set("policies", policies);
    m.set("max_words", c.max_words);
    m.set("mask", c.mask_before_scoring);
    m.set("on_parse_error", c.on_parse_error == ParseErrorPolicy::Exclude ? "exclude" : "no_information");
    nlohmann::ordered_json hashes = nlohmann::ordered_json::array();
    for (const auto& ch : run.chunks) hashes.push_back(ch.prompt_sha256);
    m.set("prompt_sha256", hashes);
    for (const auto& o : r.outputs) m.add_output(o);
    m.write();

    std::size_t errors = 0;
    for (const auto& ch : run.chunks) errors += ch.error ? 1 : 0;
    r.summary = fmt::format("scored {} chunks from {} calls ({} errors, {} provider calls)", run.chunks.size(),
                            corpus.size(), errors, engine.provider_calls());
    return r;
}

void merge_by_call(Panel& panel, const std::string& column, const std::map<std::string, double>& values) {
    auto& col = panel.ensure_column(column);
    for (std::size_t i = 0; i < panel.rows(); ++i)
        if (auto it = values.find(panel.call_id()[i]); it != values.end()) col[i] = it->second;
}

StageResult panel_observed(const RunConfig& c, Manifest& m) {
    require_file(c.paths.fundamentals, "fundamentals file");
    const auto scores_path = pick(c.paths.scores, out_file(c, "call_scores.csv"));
    require_file(scores_path, "call scores");
    const auto tpath = transcript_source(c);
    m.add_input("fundamentals", c.paths.fundamentals);
    m.add_input("call_scores", scores_path);
    m.add_input("transcripts", tpath);

    DeriveReport dr;
    Panel fund = to_panel(derive_panel_rows(read_fundamentals_csv_file(c.paths.fundamentals), {}, &dr));
    WinsorReport wr;
    if (c.winsorize) wr = apply_winsor(c, fund);

    std::vector<CallScore> scores;
    {
        auto in = open(scores_path);
        scores = read_call_scores_csv(in);
    }
    Panel calls = build_call_panel(ingest_transcripts_file(tpath), scores);

    const auto sentiment = out_file(c, "sentiment.csv");
    if (fs::exists(sentiment)) {
        m.add_input("sentiment", sentiment);
        const auto t = read_csv_file(sentiment);
        std::map<std::string, double> values;
        for (const auto& row : t.rows) values[row[t.require_column("call_id")]] = parse_number(row[t.require_column("sentiment")]);
        merge_by_call(calls, "sentiment", values);
    }
    const auto events_path = pick(c.paths.events, out_file(c, "events.csv"));
    if (fs::exists(events_path)) {
        m.add_input("events", events_path);
        auto in = open(events_path);
        const auto rows = read_events_csv(in);
        const std::pair<const char*, double EventRow::*> fields[] = {
            {"car_0_1", &EventRow::car_0_1},
            {"car_0_3", &EventRow::car_0_3},
            {"car_0_5", &EventRow::car_0_5},
            {"ff5_alpha_q", &EventRow::ff5_alpha_q},
            {"q5_alpha_q", &EventRow::q5_alpha_q},
            {"ret_q", &EventRow::ret_q},
            {"earnings_surprise", &EventRow::earnings_surprise},
            {"analyst_forecast_change", &EventRow::analyst_forecast_change},
        };
        for (const auto& [name, field] : fields) {
            std::map<std::string, double> values;
            for (const auto& e : rows) values[e.call_id] = e.*field;
            merge_by_call(calls, name, values);
        }
    }

    AssembleReport ar;
    Panel panel = assemble_panel(calls, fund, c.assemble, &ar);
    const auto path = out_file(c, "panel.csv");
    {
        auto out = create(path);
        write_panel_csv(panel, out);
    }
    m.set("source", "observed");
    m.set("derive", {{"input_rows", dr.input_rows},
                     {"dropped_missing_assets", dr.dropped_missing_assets},
                     {"filled_missing_intangibles", dr.filled_missing_intangibles}});
    m.set("assemble", {{"call_rows", ar.call_rows},
                       {"fundamental_rows", ar.fundamental_rows},
                       {"matched", ar.matched},
                       {"calls_without_fundamentals", ar.calls_without_fundamentals},
                       {"fundamentals_without_call", ar.fundamentals_without_call}});
    m.set("winsorize", c.winsorize);
    m.set("winsor_tail", c.winsor_tail);
    m.set("winsor_bounds", winsor_json(wr));
    m.add_output(path);
    m.write();
    return {0, {path}, fmt::format("panel: {} matched firm-quarters ({} calls, {} fundamentals rows)", ar.matched,
                                   ar.call_rows, ar.fundamental_rows)};
}

StageResult panel_simulated(const RunConfig& c, Manifest& m) {
    const auto src = pick(c.paths.simulated_panel, out_file(c, "simulated_panel.csv"));
    require_file(src, "simulated panel");
    m.add_input("simulated_panel", src);
    Panel panel;
    {
        auto in = open(src);
        panel = read_panel_csv(in);
    }
    WinsorReport wr;
    if (c.winsorize) wr = apply_winsor(c, panel);
    const auto path = out_file(c, "panel.csv");
    {
        auto out = create(path);
        write_panel_csv(panel, out);
    }
    m.set("source", "simulated");
    m.set("winsorize", c.winsorize);
    m.set("winsor_tail", c.winsor_tail);
    m.set("winsor_bounds", winsor_json(wr));
    m.add_output(path);
    m.write();
    return {0, {path}, fmt::format("panel: {} simulated firm-quarters", panel.rows())};
}

StageResult panel(const RunConfig& c) {
    Manifest m(Stage::Panel, c);
    return c.panel_source == RunConfig::PanelSource::Simulated ? panel_simulated(c, m) : panel_observed(c, m);
}

StageResult regress(const RunConfig& c) {
    if (c.spec_files.empty()) throw Error(Errc::ConfigError, "no regression spec files configured");
    for (const auto& f : c.spec_files) require_file(f, "regression spec file");
    const auto ppath = pick(c.paths.panel, out_file(c, "panel.csv"));
    require_file(ppath, "panel");

    Manifest m(Stage::Regress, c);
    m.add_input("panel", ppath);
    std::vector<RegressionSpec> specs;
    for (const auto& f : c.spec_files) {
        m.add_input("specs", f);
        for (auto& s : read_specs_file(f)) specs.push_back(std::move(s));
    }
    Panel panel;
    {
        auto in = open(ppath);
        panel = read_panel_csv(in);
    }
    const auto table = run_table(specs, panel);

    const auto json_path = out_file(c, "regression_results.json");
    const auto txt_path = out_file(c, "regression_table.txt");
    const auto csv_path = out_file(c, "regression_table.csv");
    {
        auto out = create(json_path);
        out << table_to_json(table).dump(2) << '\n';
    }
    {
        auto out = create(txt_path);
        render_text(table, out);
    }
    {
        auto out = create(csv_path);
        render_csv(table, out);
    }
    nlohmann::ordered_json sj = nlohmann::ordered_json::array();
    for (const auto& s : specs) sj.push_back(nlohmann::ordered_json::parse(spec_to_json(s).dump()));
    m.set("specs", sj);
    for (const auto& p : {json_path, txt_path, csv_path}) m.add_output(p);
    m.write();

    std::size_t failed = 0;
    for (const auto& col : table.columns) failed += col.result ? 0 : 1;
    return {0, {json_path, txt_path, csv_path},
            fmt::format("estimated {} of {} specs", specs.size() - failed, specs.size())};
}

StageResult events(const RunConfig& c) {
    const auto tpath = transcript_source(c);
    require_file(c.paths.daily_returns, "daily returns file");
    require_file(c.paths.daily_factors, "daily factor file");
    Manifest m(Stage::Events, c);
    m.add_input("transcripts", tpath);
    m.add_input("daily_returns", c.paths.daily_returns);
    m.add_input("daily_factors", c.paths.daily_factors);

    MarketData data;
    data.daily = read_returns_file(c.paths.daily_returns, false);
    data.daily_factors = read_factors_file(c.paths.daily_factors, false);
    if (!c.paths.monthly_factors.empty()) {
        require_file(c.paths.monthly_factors, "monthly factor file");
        m.add_input("monthly_factors", c.paths.monthly_factors);
        data.monthly_factors = read_factors_file(c.paths.monthly_factors, true);
    }
    if (!c.paths.monthly_returns.empty()) {
        require_file(c.paths.monthly_returns, "monthly returns file");
        m.add_input("monthly_returns", c.paths.monthly_returns);
        data.monthly = read_returns_file(c.paths.monthly_returns, true);
    }

    std::map<std::pair<std::string, int>, RawFirmQuarter> fundamentals;
    if (!c.paths.fundamentals.empty()) {
        require_file(c.paths.fundamentals, "fundamentals file");
        m.add_input("fundamentals", c.paths.fundamentals);
        for (auto& r : read_fundamentals_csv_file(c.paths.fundamentals)) {
            auto key = std::pair{r.firm_id, r.fiscal_quarter.index()};
            fundamentals.emplace(std::move(key), std::move(r));
        }
    }

    std::vector<EventInput> inputs;
    for (const auto& t : ingest_transcripts_file(tpath)) {
        EventInput in;
        in.call_id = t.call_id;
        in.firm_id = t.ticker;
        in.call_date = t.call_date;
        in.fiscal_quarter = t.fiscal_quarter;
        if (auto it = fundamentals.find({t.ticker, t.fiscal_quarter.index()}); it != fundamentals.end()) {
            const auto& f = it->second;
            in.eps_t = f.eps;
            in.price_t = f.price_qtr_end;
            in.capex_t = f.capx;
            in.consensus_pre = f.analyst_capex_consensus_pre;
            in.consensus_post = f.analyst_capex_consensus_post;
            if (auto prev = fundamentals.find({t.ticker, t.fiscal_quarter.index() - 4}); prev != fundamentals.end())
                in.eps_t_minus_4 = prev->second.eps;
        }
        inputs.push_back(std::move(in));
    }
    const auto rows = compute_events(inputs, data, c.events);
    const auto path = out_file(c, "events.csv");
    {
        auto out = create(path);
        write_events_csv(rows, out);
    }
    m.set("beta_window", c.events.betas.window);
    m.set("beta_min_obs", c.events.betas.min_obs);
    m.set("alpha_months", c.events.quarterly.estimation_months);
    m.set("alpha_min_months", c.events.quarterly.min_months);
    m.add_output(path);
    m.write();
    std::size_t with_errors = 0;
    for (const auto& r : rows) with_errors += r.errors.empty() ? 0 : 1;
    return {0, {path}, fmt::format("events: {} calls, {} with missing fields", rows.size(), with_errors)};
}

StageResult simulate(const RunConfig& c) {
    auto sim = c.simulation;
    sim.seed = c.seed;
    Manifest m(Stage::Simulate, c);
    const auto result = simulate_panel(sim);
    const auto ppath = out_file(c, "simulated_panel.csv");
    const auto tpath = out_file(c, "planted_truth.json");
    {
        auto out = create(ppath);
        write_panel_csv(result.panel, out);
    }
    {
        auto out = create(tpath);
        out << truth_to_json(result.truth).dump(2) << '\n';
    }
    m.set("simulation", truth_to_json(result.truth));
    m.add_output(ppath);
    m.add_output(tpath);
    m.write();
    return {0, {ppath, tpath}, fmt::format("simulated {} firm-quarters", result.panel.rows())};
}

StageResult verify_model(const RunConfig& c) {
    Manifest m(Stage::VerifyModel, c);
    PropositionGrid grid;
    if (c.paths.model_grid.empty()) {
        grid = baseline_grid();
        m.set("grid", "baseline");
    } else {
        require_file(c.paths.model_grid, "model grid file");
        m.add_input("model_grid", c.paths.model_grid);
        grid = read_grid_file(c.paths.model_grid);
    }
    const auto report = verify_propositions(grid);
    const auto txt = out_file(c, "propositions.txt");
    const auto csv = out_file(c, "model_grid.csv");
    std::ostringstream text;
    write_proposition_text(report, text);
    {
        auto out = create(txt);
        out << text.str();
    }
    {
        auto out = create(csv);
        write_grid_csv(grid, out);
    }
    m.set("param_sets", report.param_sets);
    m.set("grid_points", report.grid_points);
    m.set("all_passed", report.all_passed());
    m.add_output(txt);
    m.add_output(csv);
    m.write();
    std::cout << text.str();
    return {report.all_passed() ? 0 : 1, {txt, csv}, report.all_passed() ? "all propositions pass" : "proposition check failed"};
}

StageResult report(const RunConfig& c) {
    const auto rpath = out_file(c, "regression_results.json");
    require_file(rpath, "regression results");
    Manifest m(Stage::Report, c);
    m.add_input("regression_results", rpath);
    ResultTable table;
    {
        auto in = open(rpath);
        try {
            table = table_from_json(nlohmann::json::parse(in));
        } catch (const nlohmann::json::exception& e) {
            throw Error(Errc::ConfigError, fmt::format("{}: {}", rpath.string(), e.what()));
        }
    }
    StageResult r;
    std::ostringstream text;
    render_text(table, text);

    const auto truth_path = out_file(c, "planted_truth.json");
    if (fs::exists(truth_path)) {
        m.add_input("planted_truth", truth_path);
        PlantedTruth truth;
        {
            auto in = open(truth_path);
            truth = truth_from_json(nlohmann::json::parse(in));
        }
        const auto cmp = compare_with_truth(table, truth);
        nlohmann::ordered_json cj = nlohmann::ordered_json::array();
        text << "\nPlanted-truth comparison\n";
        for (const auto& x : cmp) {
            text << fmt::format("{:<28} planted {:>10.4f}  estimated {:>10.4f}  tolerance {:.4f}  {}\n", x.label,
                                x.planted, x.estimated, x.tolerance, x.within() ? "OK" : "OUTSIDE");
            cj.push_back({{"label", x.label},
                          {"planted", x.planted},
                          {"estimated", x.estimated},
                          {"tolerance", x.tolerance},
                          {"within", x.within()}});
        }
        const auto cpath = out_file(c, "planted_comparison.json");
        auto out = create(cpath);
        out << cj.dump(2) << '\n';
        r.outputs.push_back(cpath);
    }

    const auto txt = out_file(c, "report.txt");
    const auto csv = out_file(c, "report.csv");
    {
        auto out = create(txt);
        out << text.str();
    }
    {
        auto out = create(csv);
        render_csv(table, out);
    }
    r.outputs.insert(r.outputs.begin(), {txt, csv});
    for (const auto& o : r.outputs) m.add_output(o);
    m.write();
    std::cout << text.str();
    r.summary = fmt::format("report with {} columns", table.columns.size());
    return r;
}

}  // namespace

Panel build_call_panel(const std::vector<Transcript>& corpus, const std::vector<CallScore>& scores) {
    std::map<std::string, const Transcript*> by_id;
    for (const auto& t : corpus) by_id.emplace(t.call_id, &t);
    Panel panel;
    std::map<std::string, std::size_t> row_of;
    for (const auto& s : scores) {
        auto it = by_id.find(s.call_id);
        if (it == by_id.end())
            throw Error(Errc::MissingInput, fmt::format("score for unknown call_id '{}'", s.call_id));
        auto [pos, inserted] = row_of.try_emplace(s.call_id, 0);
        if (inserted) pos->second = panel.add_row(it->second->ticker, it->second->fiscal_quarter.index(), {}, s.call_id);
        const std::string base = fmt::format("score_{}", to_string(s.policy));
        panel.ensure_column(base)[pos->second] = s.mean_score;
        panel.ensure_column(base + "_maxabs")[pos->second] = s.maxabs_score;
    }
    return panel;
}

bool PlantedComparison::within() const noexcept { return std::abs(estimated - planted) <= tolerance; }

std::vector<PlantedComparison> compare_with_truth(const ResultTable& table, const PlantedTruth& truth) {
    const auto& cfg = truth.config;
    std::vector<PlantedComparison> out;
    for (const auto& col : table.columns) {
        if (!col.result || col.result->eiv) continue;
        const auto& r = *col.result;
        if (!r.index_of("score_investment")) continue;
        if (r.dependent == "capital_expenditure_pct" && r.lead == cfg.score_lead) {
            out.push_back({fmt::format("{}: beta_score", col.name), cfg.beta_score, r.coefficient("score_investment"),
                           0.1 * std::abs(cfg.beta_score)});
            out.push_back({fmt::format("{}: standardized effect", col.name), truth.standardized_effect,
                           standardized_effect(r, "score_investment"), 0.005});
        } else if (r.dependent == "ff5_alpha_q" && r.lead == cfg.return_lead) {
            out.push_back({fmt::format("{}: beta_return", col.name), cfg.beta_return, r.coefficient("score_investment"),
                           0.1 * std::abs(cfg.beta_return)});
        }
    }
    return out;
}

StageResult run_stage(Stage stage, const RunConfig& config) {
    fs::create_directories(config.output_dir);
    switch (stage) {
    case Stage::Ingest: return ingest(config);
    case Stage::Mask: return mask(config);
    case Stage::Score: return score(config);
    case Stage::Panel: return panel(config);
    case Stage::Regress: return regress(config);
    case Stage::Events: return events(config);
    case Stage::Simulate: return simulate(config);
    case Stage::VerifyModel: return verify_model(config);
    case Stage::Report: return report(config);
    }
    throw Error(Errc::InvalidArgument, "unknown stage");
}

}  // namespace expectq
