"""Train on the bundled toy corpus and generate for held-out MRs.

Walks through the pipeline one stage at a time: alignment, the learned
label order, a few dependency features, the generated tree and the final
sentences.
"""
from depgen import generate, train_model
from depgen.alignment import align_sentence
from depgen.corpus import all_candidate_labels
from depgen.generator import produce_trees
from depgen.planner import plan_content
from depgen.toy import heldout_corpus, training_corpus

train = training_corpus()
print(f"{len(train)} training scenarios, e.g. {train[0].references[0]!r}")
print("aligned:", align_sentence(train[0], 0).text())

model, report = train_model(train)
print("model:", model.stats())

print("\nsome features (count, probability):")
for feature, count in model.feature_model.sorted_items()[:5]:
    print(f"  {count}  {model.feature_model.probability(feature):.3f}  {feature}")

scenario = heldout_corpus()[1]
plan = plan_content(model.label_model, all_candidate_labels(scenario.mr))
print(f"\nMR {scenario.mr.to_json()}")
print("plan:", " ".join(map(str, plan.labels)))
best_tree = produce_trees(model.feature_model, plan.labels, beam=5)[0]
print("best tree:", best_tree.canonical, f"score {best_tree.score:.3f}")

print("\ntop sentences per held-out scenario (B=C=20):")
for sc in heldout_corpus():
    out = generate(sc, model)
    print(f"  {sc.id}: {out[0].sentence!r} ({out[0].score:.2f}), {len(out)} candidates")
