#!/usr/bin/env python3
"""Generate the committed demo corpus under fixtures/corpus_demo/.

82 synthetic articles on noble-metal water-gas-shift catalysis. A few
rows are pinned so the case-study queries have exact answers:

  * R51 (2017, Science) and R71 (2021, Nature) are the only articles whose
    abstracts contain the string 'MoC' (via α-MoC);
  * the ten articles published in 2021 are R71..R80 and their journals, in
    manifest order, are Nature, Energy & Fuels, Nanomaterials, Catalysis
    Today, Journal of Catalysis, Journal of Catalysis, Catalysts, Heliyon,
    International Journal of Energy Research, Catalysts;
  * R71's full text describes the incipient-wetness-impregnation synthesis
    in enough detail for comprehension questions.

Deterministic: rerunning reproduces the same files.
"""

import csv
import random
from pathlib import Path

OUT = Path(__file__).parent.parent / "fixtures" / "corpus_demo"

JOURNALS_2021 = [
    "Nature", "Energy & Fuels", "Nanomaterials", "Catalysis Today",
    "Journal of Catalysis", "Journal of Catalysis", "Catalysts", "Heliyon",
    "International Journal of Energy Research", "Catalysts",
]

JOURNAL_POOL = [
    "Applied Catalysis B: Environmental", "ACS Catalysis", "Journal of Catalysis",
    "Catalysis Today", "ChemCatChem", "International Journal of Hydrogen Energy",
    "Catalysis Letters", "Applied Surface Science", "Fuel",
    "Catalysis Science & Technology", "Topics in Catalysis", "RSC Advances",
]

METALS = ["Pt", "Au", "Pd", "Rh", "Ru", "Ir", "Cu-promoted Pt", "Pt-Re", "Au-Cu", "Pd-Zn"]
SUPPORTS = ["CeO2", "Al2O3", "TiO2", "ZrO2", "CeO2-ZrO2", "Fe2O3", "La2O3",
            "MgO", "activated carbon", "ceria nanorods"]
PREPS = ["wet impregnation", "deposition-precipitation", "co-precipitation",
         "sol-gel", "incipient wetness impregnation", "urea hydrolysis"]

SURNAMES = ["Tanaka", "Kim", "Garcia", "Muller", "Rossi", "Novak", "Silva",
            "Chen", "Johansson", "Dubois", "Petrov", "Nakamura", "Okafor",
            "Haddad", "Lindgren", "Moreau", "Ferrari", "Kowalski", "Yilmaz",
            "Andersen"]
INITIALS = "ABCDEFGHJKLMNPRSTWY"

TITLE_TEMPLATES = [
    "{metal} catalysts supported on {support} for the low-temperature water-gas shift reaction",
    "Highly dispersed {metal} on {support}: activity and stability in the water-gas shift",
    "Effect of {prep} on {metal}/{support} water-gas shift catalysts",
    "Water-gas shift over {metal}/{support}: kinetics and in situ characterization",
    "Tuning the metal-support interaction of {metal}/{support} for CO conversion",
    "{metal} nanoparticles on {support} as robust water-gas shift catalysts",
]

ABSTRACT_TEMPLATE = (
    "We report {metal} catalysts supported on {support} prepared by {prep} "
    "for the water-gas shift reaction. The catalyst reached {conv}% CO "
    "conversion at {temp} degrees Celsius and retained its activity over "
    "{hours} hours on stream. Characterization links the performance to "
    "{feature}."
)

FEATURES = [
    "highly dispersed metal sites at the oxide interface",
    "oxygen vacancies generated during reduction",
    "a high density of perimeter sites",
    "strong metal-support interaction after calcination",
    "surface hydroxyl groups activated at low temperature",
    "electronic promotion of the metal by the support",
]

R51_TITLE = ("Atomic-layered Au clusters on α-MoC as catalysts for the "
             "low-temperature water-gas shift reaction")
R51_ABSTRACT = (
    "Atomically dispersed gold layered on α-MoC creates an interface that "
    "activates water below 423 kelvin. The Au/α-MoC catalyst delivers high "
    "water-gas shift activity at temperatures where conventional catalysts "
    "are inert, with stable operation in a realistic reformate feed."
)

R71_TITLE = ("A stable low-temperature H2-production catalyst by crowding "
             "Pt on α-MoC")
R71_ABSTRACT = (
    "Crowding platinum atoms on an α-MoC substrate stabilizes the "
    "metal-carbide interface against sintering. The Pt/α-MoC catalyst "
    "sustains low-temperature hydrogen production through the water-gas "
    "shift reaction with high CO conversion and durability over extended "
    "time on stream."
)

R71_BODY = """
Introduction. Hydrogen for proton exchange membrane fuel cells must be
nearly free of carbon monoxide, and the water-gas shift reaction removes
CO while generating additional hydrogen. Platinum on alpha molybdenum
carbide (α-MoC) catalyzes this reaction at unusually low temperatures,
but isolated platinum atoms gradually aggregate under reaction
conditions. Here we show that deliberately crowding platinum onto the
α-MoC surface locks the metal into a stable, highly active layer.

Catalyst synthesis. The catalyst was prepared by incipient wetness
impregnation (IWI). First, α-MoC was synthesized: ammonium molybdate
tetrahydrate was calcined in air to form MoO3, which was heated in
flowing ammonia and then carburized in a methane/hydrogen mixture to
produce phase-pure α-MoC. Second, the fresh α-MoC was reduced in a
hydrogen/nitrogen mixture at 523 K for 60 minutes to create surface
anchoring sites for platinum. Third, an aqueous solution of chloroplatinic
acid (H2PtCl6·6H2O) matching the support pore volume was added dropwise
to the reduced α-MoC powder, and the impregnated solid was dried in a
vacuum oven. Fourth, the dried sample was mildly reduced at 623 K for 1
hour under flowing hydrogen, then exposed to a methane/hydrogen mixture
and heated to 863 K for 2 hours to reactivate the carbide surface.
Catalysts with platinum loadings between 0.2 and 8 weight percent were
prepared by the same incipient wetness impregnation route.

Catalytic performance. In a feed of 3% CO, 10% H2O, 6% CO2, 20% H2 and
balance N2, the 2% Pt/α-MoC catalyst converted more than 95% of the CO at
313 to 473 K. Apparent activation energies near 38 kJ/mol indicate that
water dissociation on the carbide is no longer rate limiting. The
catalyst held full activity for 200 hours on stream at a weight-to-flow
ratio of 1 mg min/ml, while a conventional Pt/Al2O3 reference lost half
its activity within 20 hours.

Structural characterization. Aberration-corrected electron microscopy
shows a crowded overlayer of platinum atoms and sub-nanometer clusters
covering the α-MoC terraces. In situ X-ray absorption spectroscopy finds
the platinum remains metallic while electron density is drawn toward the
carbide, consistent with the strong metal-carbide interaction that
anchors the layer. Density functional calculations attribute the
stability to the high formation energy of mobile Pt species on the
crowded surface.

Conclusions. Crowding platinum on α-MoC by incipient wetness impregnation
yields a water-gas shift catalyst that is both highly active at low
temperature and stable for hundreds of hours, a combination required for
on-board hydrogen purification.
"""

R51_BODY = """
Introduction. Gold catalysis at low temperature depends critically on the
support. On α-MoC, gold spreads into atomic layers rather than
three-dimensional particles, creating a metal-carbide interface active
for the water-gas shift reaction far below the temperatures required by
oxide-supported gold.

Synthesis. α-MoC was prepared by ammonolysis of molybdenum trioxide
followed by carburization in a methane/hydrogen stream. Gold was
deposited by a deposition-precipitation method at controlled pH, followed
by washing, drying, and a mild reductive activation. Loadings from 0.5 to
6 weight percent gold were studied.

Performance. The layered Au/α-MoC catalyst converts CO in the water-gas
shift reaction at temperatures as low as 313 K. At 423 K the measured
rates exceed those of Au/CeO2 references by more than an order of
magnitude. Kinetic analysis gives an apparent activation energy of 27
kJ/mol, and isotope exchange shows facile water dissociation on the
carbide surface.

Mechanism. Microscopy and X-ray spectroscopy show two-dimensional gold
layers that remain atomically thin during reaction. The interface between
the gold layer and the carbide binds CO weakly while the carbide supplies
dissociated water, a division of labor that explains the low-temperature
activity.

Conclusions. Atomic layering of gold on α-MoC defines a distinct class of
low-temperature water-gas shift catalysts limited not by water activation
but by site density, motivating strategies that maximize the layered
interface.
"""

BODY_TEMPLATE = """
Introduction. The water-gas shift reaction converts carbon monoxide and
steam into carbon dioxide and hydrogen, purifying reformate streams for
fuel cells. This study examines {metal} catalysts supported on {support}.

Experimental. Catalysts were prepared by {prep}. The {metal} loading was
varied between 0.5 and 8 weight percent. Activity was measured in a fixed
bed reactor between 150 and 400 degrees Celsius in a feed containing CO,
H2O, CO2, H2 and N2, at weight-to-flow ratios from 0.5 to 120 mg min/ml.

Results. The best sample reached {conv}% CO conversion at {temp} degrees
Celsius and retained activity for {hours} hours on stream. Conversion
remained below the thermodynamic equilibrium limit at every temperature,
approaching it closely above {temp2} degrees Celsius. Characterization
attributes the activity to {feature}.

Discussion. Comparison across loadings shows the rate scaling with the
perimeter of the metal-support interface rather than total metal area,
consistent with a bifunctional mechanism in which the support activates
water. Deactivation correlates with particle growth, and regeneration in
dilute oxygen restores most of the initial activity.

Conclusions. {metal} on {support} prepared by {prep} is an effective
water-gas shift catalyst; interface engineering offers a route to higher
low-temperature rates.
"""


def authors_for(rng) -> str:
    n = rng.randint(2, 4)
    names = rng.sample(SURNAMES, n)
    return "; ".join(f"{rng.choice(INITIALS)}. {s}" for s in names)


def build_rows():
    rng = random.Random(718)
    rows = []
    texts = {}
    year_plan = (
        [(f"R{i}", 2013) for i in range(1, 11)]
        + [(f"R{i}", 2014) for i in range(11, 21)]
        + [(f"R{i}", 2015) for i in range(21, 31)]
        + [(f"R{i}", 2016) for i in range(31, 41)]
        + [(f"R{i}", 2017) for i in range(41, 51)]
        + [("R51", 2017)]
        + [(f"R{i}", 2018) for i in range(52, 61)]
        + [(f"R{i}", 2019) for i in range(61, 66)]
        + [(f"R{i}", 2020) for i in range(66, 71)]
        + [(f"R{i}", 2021) for i in range(71, 81)]
        + [("R81", 2020), ("R82", 2019)]
    )
    journals_2021 = iter(JOURNALS_2021)
    for ref, year in year_plan:
        if ref == "R51":
            title, abstract = R51_TITLE, R51_ABSTRACT
            journal = "Science"
            body = R51_BODY
        elif ref == "R71":
            title, abstract = R71_TITLE, R71_ABSTRACT
            journal = next(journals_2021)
            body = R71_BODY
        else:
            metal = rng.choice(METALS)
            support = rng.choice(SUPPORTS)
            prep = rng.choice(PREPS)
            conv = rng.randint(55, 97)
            temp = rng.choice([180, 200, 220, 250, 280, 300, 320, 350])
            hours = rng.choice([20, 50, 100, 150, 200])
            feature = rng.choice(FEATURES)
            title = rng.choice(TITLE_TEMPLATES).format(
                metal=metal, support=support, prep=prep)
            abstract = ABSTRACT_TEMPLATE.format(
                metal=metal, support=support, prep=prep, conv=conv, temp=temp,
                hours=hours, feature=feature)
            journal = next(journals_2021) if year == 2021 else rng.choice(JOURNAL_POOL)
            body = BODY_TEMPLATE.format(metal=metal, support=support, prep=prep,
                                        conv=conv, temp=temp, temp2=temp + 50,
                                        hours=hours, feature=feature)
        assert ("MoC" in abstract) == (ref in ("R51", "R71"))
        doi = f"10.5555/wgs.{year}.{int(ref[1:]):04d}"
        rows.append([ref, str(year), title, abstract, journal,
                     authors_for(rng), doi])
        texts[ref] = f"{title}\n\nAbstract. {abstract}\n{body}"
    return rows, texts


def main():
    rows, texts = build_rows()
    corpus_dir = OUT / "corpus"
    corpus_dir.mkdir(parents=True, exist_ok=True)
    with (OUT / "manifest.csv").open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["ref_id", "year", "title", "abstract", "journal",
                         "authors", "doi"])
        writer.writerows(rows)
    for ref, text in texts.items():
        (corpus_dir / f"{ref}.txt").write_text(text, encoding="utf-8")
    print(f"wrote {len(rows)} manifest rows and {len(texts)} texts to {OUT}")


if __name__ == "__main__":
    main()
