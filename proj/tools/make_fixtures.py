#!/usr/bin/env python3
"""Regenerate the bundled fixtures under data/fixtures (fixed seed)."""

import csv
import datetime as dt
import math
import pathlib
import random

ROOT = pathlib.Path(__file__).resolve().parent.parent / "data" / "fixtures"
rng = random.Random(20160704)


def write_csv(path, rows):
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as f:
        csv.writer(f, lineterminator="\n").writerows(rows)


# Mini-corpus: twelve short chapters drifting from a country register to a
# town register, with three tracked feelings peaking at different points.
COUNTRY = ["meadow", "orchard", "farm", "river", "garden", "hedge", "cattle", "harvest", "village", "mill"]
TOWN = ["theatre", "carriage", "ballroom", "street", "shop", "debts", "opera", "hotel", "letters", "notary"]
COMMON = ["heart", "window", "evening", "husband", "mother", "door", "dress", "morning", "silence", "voice"]
FEELINGS = {"kiss": 3, "tenderness": 6, "happiness": 9}
VERBS = ["watched", "remembered", "crossed", "opened", "lost", "wanted", "touched", "followed"]
FILLER = ["the", "of", "in", "with", "and", "to", "was", "had", "by", "from"]


def chapter(n):
    town_share = (n - 1) / 11
    words = []
    for _ in range(260):
        r = rng.random()
        if r < 0.35:
            words.append(rng.choice(FILLER))
        elif r < 0.55:
            words.append(rng.choice(TOWN if rng.random() < town_share else COUNTRY))
        elif r < 0.75:
            words.append(rng.choice(COMMON))
        elif r < 0.9:
            words.append(rng.choice(VERBS))
        else:
            weights = [math.exp(-((n - peak) ** 2) / 6.0) + 0.05 for peak in FEELINGS.values()]
            words.append(rng.choices(list(FEELINGS), weights)[0])
    lines, line = [], []
    for w in words:
        line.append(w)
        if len(line) >= rng.randint(7, 12):
            lines.append(" ".join(line).capitalize() + ".")
            line = []
    if line:
        lines.append(" ".join(line).capitalize() + ".")
    return f"Chapter {n}\n\n" + "\n".join(lines) + "\n"


for n in range(1, 13):
    path = ROOT / "minicorpus" / f"ch{n:02d}.txt"
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(chapter(n), encoding="utf-8")


# Beats x terms presence/absence, 11 x 210: each term is active over a window
# of consecutive beats.
beats = [f"beat{b:02d}" for b in range(1, 12)]
terms = [f"w{t:03d}" for t in range(1, 211)]
presence = []
for t in range(210):
    centre = rng.uniform(0, 10)
    width = rng.uniform(0.8, 3.0)
    col = [1 if abs(b - centre) <= width or rng.random() < 0.06 else 0 for b in range(11)]
    if not any(col):
        col[round(centre)] = 1
    presence.append(col)
for b in range(11):
    if not any(presence[t][b] for t in range(210)):
        presence[rng.randrange(210)][b] = 1
write_csv(ROOT / "beats_presence.csv",
          [[""] + terms] + [[beats[b]] + [presence[t][b] for t in range(210)] for b in range(11)])


# Survey: 14 principal questions driven by two latent traits, 9 supplementary
# background questions, a few unanswered cells.
N = 400
principal = [(f"q{q:02d}", ["agree", "neutral", "disagree"] if q % 3 else ["often", "sometimes", "rarely", "never"])
             for q in range(1, 15)]
supplementary = [("age", ["18-29", "30-44", "45-59", "60+"]), ("gender", ["f", "m"]),
                 ("region", ["north", "south", "east", "west"]), ("education", ["primary", "secondary", "tertiary"]),
                 ("income", ["low", "middle", "high"]), ("urban", ["yes", "no"]),
                 ("employment", ["employed", "unemployed", "student", "retired"]),
                 ("household", ["1", "2", "3+"]), ("prior_contact", ["yes", "no"])]
header = ["id"] + [q for q, _ in principal] + [q for q, _ in supplementary]
roles = ["role"] + ["principal"] * len(principal) + ["supplementary"] * len(supplementary)
rows = [header, roles]
for i in range(N):
    a, b = rng.gauss(0, 1), rng.gauss(0, 1)
    row = [f"ind{i + 1:03d}"]
    for q, (_, cats) in enumerate(principal):
        latent = (a if q % 2 == 0 else b) + 0.3 * (a if q % 2 else b) + rng.gauss(0, 0.8)
        k = len(cats)
        idx = min(k - 1, max(0, int((latent + 1.5) / 3.0 * k)))
        row.append("" if rng.random() < 0.015 else cats[idx])
    for name, cats in supplementary:
        if name == "age":
            idx = min(3, max(0, int((a + 2) / 4 * 4)))
        elif name == "income":
            idx = min(2, max(0, int((b + 1.5) / 3 * 3)))
        else:
            idx = rng.randrange(len(cats))
        row.append("" if rng.random() < 0.01 else cats[idx])
    rows.append(row)
write_csv(ROOT / "survey.csv", rows)


# Campaigns: 8 groups of tweets over 40 terms; each group's first tweet is its
# initiator ("tic<g>").
TERMS = [f"t{j:02d}" for j in range(1, 41)]
table = [[""] + TERMS]
groups, initiators = [["group", "member"]], [["group", "initiator"]]
for g in range(1, 9):
    focus = rng.sample(range(40), 6)
    for k in range(12):
        label = f"tic{g}" if k == 0 else f"c{g}-{k:02d}"
        counts = [rng.choice([0, 0, 0, 1]) for _ in range(40)]
        for j in focus:
            counts[j] += rng.randint(1, 4)
        table.append([label] + counts)
        groups.append([f"C{g}", label])
    initiators.append([f"C{g}", f"tic{g}"])
for j in range(40):
    if all(row[j + 1] == 0 for row in table[1:]):
        table[1 + rng.randrange(96)][j + 1] = 1
write_csv(ROOT / "campaigns.csv", table)
write_csv(ROOT / "campaign_groups.csv", groups)
write_csv(ROOT / "campaign_initiators.csv", initiators)


# Tweets over a month with two silent days.
tweet_rows = [["timestamp", "text"]]
day = dt.date(2015, 5, 11)
silent = {dt.date(2015, 5, 19), dt.date(2015, 6, 2)}
phrases = ["festival opening tonight", "queue at the main gate", "rain over the stage", "best concert ever",
           "lost my ticket", "tickets sold out", "Москва fans arrived", "sunset at the main stage",
           "RT great lineup via the radio", "the headliner was late"]
while day <= dt.date(2015, 6, 10):
    if day not in silent:
        for _ in range(rng.randint(3, 9)):
            ts = dt.datetime(day.year, day.month, day.day, rng.randint(0, 23), rng.randint(0, 59), rng.randint(0, 59))
            tweet_rows.append([ts.strftime("%Y-%m-%dT%H:%M:%SZ"), rng.choice(phrases)])
    day += dt.timedelta(days=1)
write_csv(ROOT / "tweets.csv", tweet_rows)


# A short script with scene markers.
scenes = ["The cafe at night. Rain on the window.", "A station platform. A train waits.",
          "The cafe again. A song is playing.", "An airfield in fog. Two figures walk away."]
text = "FADE IN\n\n" + "".join(f"SCENE {s + 1}\n{body}\n\n" for s, body in enumerate(scenes))
(ROOT / "script.txt").write_text(text, encoding="utf-8")
