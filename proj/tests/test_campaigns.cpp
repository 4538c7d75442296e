#include <gtest/gtest.h>

#include <filesystem>

#include "hypermatch/campaigns.hpp"
#include "hypermatch/construct.hpp"

using namespace hypermatch;

namespace {

CampaignContext ctx(unsigned jobs)
{
    CampaignContext c;
    c.seed = 42;
    c.jobs = jobs;
    c.artifact_dir = (std::filesystem::temp_directory_path() / "hypermatch_campaign_test").string();
    return c;
}

}  // namespace

TEST(Campaigns, Lemma37SmallRunIsCleanAndJobIndependent)
{
    Lemma37Params p;
    p.samples = 5000;
    p.mutants = 2000;
    auto a = run_lemma37(p, ctx(1));
    auto b = run_lemma37(p, ctx(3));
    EXPECT_EQ(a.dump(), b.dump());
    EXPECT_EQ(a["violations"], 0);
    EXPECT_EQ(a["campaign"], "lemma37");
}

TEST(Campaigns, Tightness)
{
    TightnessParams p;
    p.sizes = {8, 12};
    auto j = run_tightness(p, ctx(1));
    EXPECT_EQ(j["violations"], 0);
}

TEST(Campaigns, SolverAgreesWithNaive)
{
    SolverParams p;
    p.n_max = 10;
    p.trials = 300;
    auto a = run_solver(p, ctx(1));
    auto b = run_solver(p, ctx(2));
    EXPECT_EQ(a.dump(), b.dump());
    EXPECT_EQ(a["violations"], 0);
}

TEST(Campaigns, NaiveMaxMatching)
{
    EXPECT_EQ(naive_max_matching(Hypergraph::complete(4, 12)), 3u);
    EXPECT_EQ(naive_max_matching(extremal_construction(8)), 1u);
    EXPECT_EQ(naive_max_matching(Hypergraph(4, 9, {})), 0u);
}

TEST(Campaigns, AbsorbSmall)
{
    AbsorbParams p;
    p.n = 24;
    p.absorb_trials = 40;
    auto a = run_absorb(p, ctx(1));
    auto b = run_absorb(p, ctx(2));
    EXPECT_EQ(a.dump(), b.dump());
    EXPECT_EQ(a["violations"], 0);
}

TEST(Campaigns, PipelineSmall)
{
    PipelineParams p;
    p.n = 16;
    p.instances = 3;
    p.extremal_sizes = {8, 12};
    auto a = run_pipeline(p, ctx(1));
    auto b = run_pipeline(p, ctx(2));
    EXPECT_EQ(a.dump(), b.dump());
    EXPECT_EQ(a["violations"], 0);
}
