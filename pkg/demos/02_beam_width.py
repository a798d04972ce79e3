"""How the beam width B (with C = B) changes the best score and BLEU-4."""
from depgen import generate, train_model
from depgen.evaluation import bleu4
from depgen.toy import heldout_corpus, training_corpus

model, _ = train_model(training_corpus())
heldout = heldout_corpus()
refs = [list(sc.references) for sc in heldout]

print(f"{'B':>3}  {'BLEU-4':>7}  {'mean best score':>15}")
for width in (1, 5, 10, 15, 20):
    best = [generate(sc, model, beam=width, candidates=width)[0] for sc in heldout]
    bleu = bleu4([r.sentence for r in best], refs)
    mean = sum(r.score for r in best) / len(best)
    print(f"{width:>3}  {100 * bleu:7.2f}  {mean:15.3f}")
