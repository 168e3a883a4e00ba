#!/usr/bin/env python3
"""Generate the demo scenario's knowledge base, training set and word vectors.

Each intent owns a direction in embedding space; every word is pinned to
one intent and gets  cat_w * C[category] + grp_w * G[intent] + noise.
Run from anywhere:  python3 tools/gen_scenario.py [--out data/scenario]
"""

import argparse
import json
import os
import random
import sys
import unicodedata

CONSULTATION = "consultation_subject"
PERSONAL = "personal"
HISTORY = "medical_history"
SYMPTOMS = "symptoms"
LIFESTYLE = "lifestyle"
TREATMENT = "treatment"
UNKNOWN = "unknown"

# (category, kb questions, answer, pinned lemmas, extra training questions)
INTENTS = [
    (CONSULTATION, ["Why did you come to the emergency room?", "What is the reason for your visit?"],
     "Because my stomach hurts a lot since this morning.",
     ["why", "come", "emergency", "room", "reason", "visit", "bring", "here"],
     ["What brings you here?", "Why are you here?"]),
    (CONSULTATION, ["Who sent you to the hospital?", "Did a doctor refer you?"],
     "Nobody, I came by myself.",
     ["who", "send", "hospital", "refer", "referral", "letter"],
     ["Were you referred by someone?"]),
    (CONSULTATION, ["How did you get to the hospital?", "How did you arrive here?"],
     "My wife drove me.",
     ["arrive", "drive", "transport", "ambulance"],
     ["Did you come by ambulance?"]),
    (CONSULTATION, ["What do you expect from this consultation?", "What do you hope we can do for you?"],
     "I just want the pain to stop.",
     ["expect", "hope", "want", "consultation", "goal"],
     ["What is your goal today?"]),
    (CONSULTATION, ["Is this the first time you consult for this?", "Have you already been seen for this?"],
     "No, it is the first time.",
     ["first", "time", "already", "see", "consult"],
     ["Did you already consult?"]),
    (CONSULTATION, ["What is your main complaint?", "What bothers you the most?"],
     "This pain in my belly.",
     ["main", "complaint", "bother", "most", "concern"],
     ["What is your main concern?"]),
    (CONSULTATION, ["Did you come alone?", "Are you accompanied?"],
     "No, my wife is in the waiting room.",
     ["alone", "accompany", "companion"],
     ["Is a companion with you?"]),
    (CONSULTATION, ["Have you seen your general practitioner?", "Did you call your usual physician?"],
     "No, I came directly to the emergency room.",
     ["general", "practitioner", "physician", "call", "usual", "directly"],
     ["Did your physician see you?"]),
    (CONSULTATION, ["Did you wait a lot?", "Were you waiting for hours?"],
     "About one hour.",
     ["wait", "hour", "queue", "crowd"],
     ["Was the queue long?"]),
    (CONSULTATION, ["Are you worried?", "What scares you about this?"],
     "I am afraid it is something serious.",
     ["worry", "scare", "afraid", "fear", "anxious", "serious"],
     ["Are you afraid?"]),
    (CONSULTATION, ["What do you think you have?", "Do you have an idea of the cause?"],
     "Maybe something I ate.",
     ["think", "idea", "cause", "guess"],
     ["What do you guess is the cause?"]),
    (CONSULTATION, ["Do you have health insurance?", "Did you bring your insurance card?"],
     "Yes, my card is in my wallet.",
     ["insurance", "card", "wallet"],
     ["Is your insurance card with you?"]),

    (PERSONAL, ["What is your name?", "Could you give me your full name?"],
     "My name is Paul Martin.",
     ["name", "full", "give", "surname"],
     ["What is your surname?"]),
    (PERSONAL, ["How old are you?", "What is your age?"],
     "I am 45 years old.",
     ["old", "age", "year", "birth", "born"],
     ["When were you born?"]),
    (PERSONAL, ["How much do you weigh?", "What is your weight?"],
     "I weigh 82 kilos.",
     ["weigh", "weight", "kilo", "heavy"],
     ["How heavy are you?"]),
    (PERSONAL, ["How tall are you?", "What is your height?"],
     "One meter eighty.",
     ["tall", "height", "meter", "size"],
     ["What is your size?"]),
    (PERSONAL, ["What is your job?", "What is your profession?"],
     "I am a truck driver.",
     ["job", "work", "profession", "occupation", "employ", "driver", "truck"],
     ["Where do you work?", "What is your occupation?"]),
    (PERSONAL, ["Do you live in a house or a flat?", "What kind of housing do you have?"],
     "I live in a house with my wife.",
     ["live", "house", "flat", "housing", "apartment", "home"],
     ["Where is your home?"]),
    (PERSONAL, ["Are you married?", "Do you have a partner?"],
     "Yes, I am married.",
     ["marry", "wife", "husband", "partner", "single"],
     ["Do you have a wife?"]),
    (PERSONAL, ["Do you have children?", "How many kids do you have?"],
     "I have two daughters.",
     ["child", "kid", "daughter", "son", "many"],
     ["Do you have a son?"]),
    (PERSONAL, ["Which country are you from?", "What is your nationality?"],
     "I was born in Lyon.",
     ["country", "nationality", "origin", "city"],
     ["What is your city of origin?"]),
    (PERSONAL, ["Did you go to university?", "What studies did you do?"],
     "I stopped school at eighteen.",
     ["university", "study", "school", "education", "degree"],
     ["What is your education?"]),
    (PERSONAL, ["Which languages do you speak?", "Do you speak English?"],
     "Only French, and a little English.",
     ["language", "speak", "english", "french"],
     ["Do you speak French?"]),
    (PERSONAL, ["What is your phone number?", "How can we contact you?"],
     "My phone number is in my file.",
     ["phone", "number", "contact", "address"],
     ["What is your address?"]),

    (HISTORY, ["What is your medical history?", "Were you ever sick before?"],
     "No, nothing special.",
     ["medical", "history", "illness", "past", "suffer", "health", "problem", "disease", "sick"],
     ["Were you sick in the past?", "Do you have health problems?"]),
    (HISTORY, ["Do you have a family history?", "Are there diseases in your family?"],
     "No doctor",
     ["family", "environment", "know", "relative", "parent", "mother", "father", "brother", "sister",
      "hereditary", "particular"],
     ["Did your parents have health problems?", "Is your mother sick?"]),
    (HISTORY, ["Have you ever had surgery?", "Were you operated before?"],
     "I was operated on the knee ten years ago.",
     ["surgery", "operate", "operation", "surgical", "scar", "before"],
     ["Did you have an operation?"]),
    (HISTORY, ["Are you allergic to anything?", "Do you have any allergies?"],
     "I'm allergic to pollen.",
     ["allergy", "allergic", "pollen"],
     ["Are you allergic to pollen?"]),
    (HISTORY, ["Have you been hospitalized before?", "Did you ever stay in a clinic?"],
     "Only for the knee surgery.",
     ["hospitalize", "stay", "clinic"],
     ["Were you in a clinic?"]),
    (HISTORY, ["Are you diabetic?", "Do you have diabetes?"],
     "No, I am not diabetic.",
     ["diabetic", "diabetes", "sugar", "glucose"],
     ["Is your blood sugar high?"]),
    (HISTORY, ["Do you have high blood pressure?", "Is your blood pressure normal?"],
     "My blood pressure is normal.",
     ["blood", "pressure", "high", "hypertension", "normal"],
     ["Do you have hypertension?"]),
    (HISTORY, ["Do you have heart problems?", "Have you had a heart attack?"],
     "No heart problems.",
     ["heart", "attack", "cardiac", "chest"],
     ["Any cardiac disease?"]),
    (HISTORY, ["Are your vaccines up to date?", "Are you vaccinated?"],
     "Yes, my vaccines are up to date.",
     ["vaccine", "vaccinate", "vaccination", "date", "tetanus"],
     ["Did you get the tetanus vaccine?"]),
    (HISTORY, ["Has anyone in your family had cancer?", "Any cancer in your relatives?"],
     "My father had colon cancer.",
     ["cancer", "tumor", "colon"],
     ["Did your father have a tumor?"]),
    (HISTORY, ["Do you have asthma?", "Do you have breathing problems?"],
     "I had asthma as a child.",
     ["asthma", "breathe", "breathing", "lung", "inhaler"],
     ["Do you use an inhaler?"]),
    (HISTORY, ["Have you had stomach problems before?", "Did you already have an ulcer?"],
     "I had an ulcer five years ago.",
     ["ulcer", "gastritis", "reflux"],
     ["Do you have reflux?"]),

    (SYMPTOMS, ["where exactly do you hurt?", "Where does it hurt?"],
     "I hurt in the stomach.",
     ["where", "exactly", "hurt", "pain", "locate", "location", "stomach", "belly", "abdomen", "place",
      "point"],
     ["Show me where it hurts.", "Is the pain in your abdomen?"]),
    (SYMPTOMS, ["Are you feverish?", "Have you had chills?"],
     "No, I have no fever.",
     ["feverish", "fever", "temperature", "hot", "chill", "shiver"],
     ["Do you have chills?"]),
    (SYMPTOMS, ["what is the color of your urine?", "Is your urine clear?"],
     "I have clear urine",
     ["color", "urine", "dark", "clear", "pee"],
     ["Is your urine dark?"]),
    (SYMPTOMS, ["Does it burn when you urinate?", "Do you urinate often?"],
     "No, urinating is normal.",
     ["urinate", "burn", "bladder", "toilet", "often"],
     ["Do you go to the toilet often?"]),
    (SYMPTOMS, ["When did the pain start?", "Since when do you have this pain?"],
     "It started last night after dinner.",
     ["when", "start", "begin", "onset", "night", "yesterday", "long"],
     ["Did it begin yesterday?"]),
    (SYMPTOMS, ["Is the pain getting worse?", "Has the pain changed since it started?"],
     "It is getting worse every hour.",
     ["worse", "change", "evolve", "evolution", "better", "increase"],
     ["Is it better or worse?"]),
    (SYMPTOMS, ["How strong is the pain?", "How would you rate your pain from one to ten?"],
     "About eight out of ten.",
     ["strong", "rate", "intense", "severe", "ten", "scale", "bad", "one"],
     ["Is the pain severe?"]),
    (SYMPTOMS, ["How would you describe the pain?", "Is it a cramping pain?"],
     "It is like a cramp, it comes and goes.",
     ["describe", "cramp", "stab", "sharp", "dull"],
     ["Is it a sharp pain?"]),
    (SYMPTOMS, ["Does the pain spread somewhere?", "Does it radiate to your back?"],
     "Yes, it goes to my back.",
     ["spread", "radiate", "back", "shoulder", "somewhere"],
     ["Does it go to your shoulder?"]),
    (SYMPTOMS, ["Do you feel nauseous?", "Do you feel like vomiting?"],
     "Yes, I feel nauseous.",
     ["nauseous", "nausea", "vomit", "puke", "throw"],
     ["Did you throw up?"]),
    (SYMPTOMS, ["Do you have diarrhea?", "Do you have constipation?"],
     "No, my stools are normal.",
     ["diarrhea", "constipation", "stool", "bowel", "transit"],
     ["Are your bowels normal?"]),
    (SYMPTOMS, ["Do you have appetite?", "Are you hungry?"],
     "No, I am not hungry at all.",
     ["appetite", "hungry", "hunger", "lose"],
     ["Have you lost your appetite?"]),
    (SYMPTOMS, ["Do you feel dizzy?", "Did you faint?"],
     "No, I did not faint.",
     ["dizzy", "faint", "dizziness", "lightheaded"],
     ["Are you lightheaded?"]),
    (SYMPTOMS, ["Are you sweating?", "Do you sweat at night?"],
     "A little, when the pain is strong.",
     ["sweat"],
     ["Do you sweat a lot?"]),
    (SYMPTOMS, ["Does moving make the pain worse?", "Is it painful when you walk?"],
     "Yes, I prefer to stay still.",
     ["move", "walk", "painful", "position", "lie"],
     ["Is it painful to lie down?"]),
    (SYMPTOMS, ["Is your skin yellow?", "Have you noticed yellow eyes?"],
     "No, my skin looks normal.",
     ["skin", "yellow", "eye", "notice", "jaundice"],
     ["Do you have jaundice?"]),

    (LIFESTYLE, ["Do you smoke?", "How many cigarettes a day?"],
     "I smoke a pack a day.",
     ["smoke", "cigarette", "tobacco", "pack", "smoker", "day"],
     ["Are you a smoker?"]),
    (LIFESTYLE, ["Do you drink alcohol?", "How much wine do you drink?"],
     "A glass of wine with dinner.",
     ["drink", "alcohol", "wine", "beer", "glass"],
     ["Do you drink beer?"]),
    (LIFESTYLE, ["Do you use drugs?", "Have you ever taken cannabis?"],
     "No, never.",
     ["drug", "cannabis", "use", "recreational"],
     ["Any recreational drugs?"]),
    (LIFESTYLE, ["Do you have pets?", "Do you have a dog or a cat?"],
     "I have a dog.",
     ["pet", "dog", "cat", "animal"],
     ["Do you live with animals?"]),
    (LIFESTYLE, ["Do you do sport?", "Do you exercise regularly?"],
     "I go jogging on Sundays.",
     ["sport", "exercise", "regularly", "jog", "gym", "physical", "activity"],
     ["Do you have a physical activity?"]),
    (LIFESTYLE, ["What do you usually eat?", "Do you eat a lot of fat?"],
     "I eat a lot of fast food.",
     ["eat", "food", "fat", "diet", "meal", "dinner", "usually"],
     ["How is your diet?"]),
    (LIFESTYLE, ["Do you sleep well?", "How many hours do you sleep?"],
     "I slept badly last night.",
     ["sleep", "insomnia", "bed", "rest"],
     ["Do you have insomnia?"]),
    (LIFESTYLE, ["Did you travel recently?", "Have you been abroad lately?"],
     "No, I have not traveled this year.",
     ["travel", "abroad", "recently", "lately", "trip", "recent"],
     ["Any recent trip abroad?"]),
    (LIFESTYLE, ["Do you drink coffee?", "How many coffees per day?"],
     "Three coffees a day.",
     ["coffee", "tea", "caffeine"],
     ["Do you drink tea?"]),
    (LIFESTYLE, ["Are you stressed at work?", "Do you have a lot of stress?"],
     "My job is quite stressful.",
     ["stress", "stressful", "tension", "tired"],
     ["Are you tired?"]),
    (LIFESTYLE, ["Do you drink enough water?", "How much water do you drink per day?"],
     "Not enough, maybe one liter.",
     ["water", "enough", "liter", "hydrate"],
     ["Do you hydrate enough?"]),

    (TREATMENT, ["Did you take any medicine for the pain?", "What medication did you take?"],
     "I took two paracetamol this morning.",
     ["take", "medicine", "medication", "paracetamol", "pill", "tablet", "much"],
     ["Did you take a pill?", "Which tablet did you take?"]),
    (TREATMENT, ["Did it relieve you?", "Was the treatment effective?"],
     "Not really, the pain came back.",
     ["relieve", "relief", "effective", "effect", "efficient"],
     ["Did you get relief?"]),
    (TREATMENT, ["Do you have a treatment?", "Are you under treatment?"],
     "Nothing except paracetamol.",
     ["treatment", "therapy", "under", "follow"],
     ["Do you follow a therapy?"]),
    (TREATMENT, ["How did you take the pills?", "Did you take it orally?"],
     "With a glass of water.",
     ["orally", "dose", "swallow", "method"],
     ["What dose did you swallow?"]),
    (TREATMENT, ["When did you take the last pill?", "At what time did you take the medicine?"],
     "At eight this morning.",
     ["last", "morning", "clock"],
     ["Was it this morning?"]),
    (TREATMENT, ["Who prescribed this treatment?", "Do you have a prescription?"],
     "Nobody, I bought it at the pharmacy.",
     ["prescribe", "prescription", "pharmacy", "pharmacist", "buy"],
     ["Did you buy it at the pharmacy?"]),
    (TREATMENT, ["Are you taking antibiotics?", "Did you take antibiotics recently?"],
     "No antibiotics.",
     ["antibiotic", "infection", "amoxicillin"],
     ["Any antibiotic for an infection?"]),
    (TREATMENT, ["Do you take blood thinners?", "Are you on anticoagulants?"],
     "No, I do not take any.",
     ["thinner", "anticoagulant", "aspirin"],
     ["Do you take aspirin?"]),
    (TREATMENT, ["Do you take your treatment regularly?", "Do you forget to take your pills?"],
     "I always take it as prescribed.",
     ["forget", "miss", "compliance", "always"],
     ["Do you miss doses?"]),
    (TREATMENT, ["Did you have side effects?", "Did the medicine make you sick?"],
     "No side effects.",
     ["side", "adverse", "tolerate"],
     ["Do you tolerate the medicine?"]),
    (TREATMENT, ["Did you try anything else to relieve the pain?", "Did you use a hot water bottle?"],
     "I put a hot water bottle on my belly.",
     ["try", "else", "remedy", "bottle", "homemade"],
     ["Did you try a remedy?"]),
    (TREATMENT, ["Did you take ibuprofen?", "Have you taken anti-inflammatory drugs?"],
     "No, only paracetamol.",
     ["ibuprofen", "inflammatory", "anti", "nsaid"],
     ["Any nsaid?"]),
]

# Vocabulary the classifier learns but the knowledge base has no answer for.
TRAINING_ONLY = [
    (SYMPTOMS, ["headache", "head", "migraine", "vision", "blurry", "tinnitus"],
     ["Do you have a headache?", "Is your vision blurry?", "Does your head hurt?", "Do you have tinnitus?"]),
    (UNKNOWN, ["weather", "rain", "sunny", "sky", "outside", "snow", "cloud"],
     ["What is the weather like today?", "Is it going to rain?", "Is it sunny outside?",
      "Will it snow?", "Is the sky cloudy?", "Are there clouds in the sky?"]),
    (UNKNOWN, ["football", "match", "game", "team", "win", "support", "play", "video"],
     ["Who won the football match?", "Which team do you support?", "Do you play video games?",
      "Did you watch the game?", "Will your team win?"]),
    (UNKNOWN, ["music", "listen", "movie", "film", "song", "book", "read", "sing", "favorite", "watch"],
     ["What music do you listen to?", "Have you seen the latest movie?", "What is your favorite song?",
      "Do you read books?", "Can you sing?", "What is your favorite film?"]),
    (UNKNOWN, ["capital", "france", "president", "election", "stock", "market", "politics", "vote"],
     ["What is the capital of France?", "Who is the president?", "Who will win the election?",
      "How is the stock market?", "Do you vote?", "Are you into politics?"]),
    (UNKNOWN, ["joke", "robot", "ghost", "believe", "meaning", "life", "plus", "two", "universe", "cloudy",
               "latest"],
     ["Tell me a joke.", "Are you a robot?", "Do you believe in ghosts?",
      "What is the meaning of life?", "What is two plus two?", "How old is the universe?"]),
]

CATEGORIES = [CONSULTATION, PERSONAL, HISTORY, SYMPTOMS, LIFESTYLE, TREATMENT, UNKNOWN]


def read_lines(path):
    with open(path, encoding="utf-8") as f:
        return [line.rstrip("\n") for line in f]


def load_tables(asset_dir):
    stop = set()
    for line in read_lines(os.path.join(asset_dir, "stopwords.txt")):
        line = line.split("#", 1)[0].strip()
        if line:
            stop.add(line)

    def mapping(name):
        out = {}
        for line in read_lines(os.path.join(asset_dir, name)):
            if line.strip() and not line.startswith("#"):
                k, v = line.split("\t")
                out[k] = v
        return out

    return stop, mapping("lemmas.tsv"), mapping("spell.tsv")


def normalize(text, tables):
    stop, lemmas, spell = tables
    text = unicodedata.normalize("NFC", unicodedata.normalize("NFC", text).lower())
    text = "".join(" " if unicodedata.category(c)[0] in "PS" else c for c in text)
    out = []
    for tok in text.split():
        tok = spell.get(tok, tok)
        tok = lemmas.get(tok, tok)
        if tok not in stop:
            out.append(tok)
    return out[:50]


def unit(rng, dim):
    v = [rng.gauss(0.0, 1.0) for _ in range(dim)]
    n = sum(x * x for x in v) ** 0.5
    return [x / n for x in v]


def main():
    here = os.path.dirname(os.path.abspath(__file__))
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default=os.path.join(here, "..", "data", "scenario"))
    ap.add_argument("--dim", type=int, default=48)
    ap.add_argument("--seed", type=int, default=20190401)
    ap.add_argument("--cat-weight", type=float, default=0.8)
    ap.add_argument("--group-weight", type=float, default=1.0)
    ap.add_argument("--noise", type=float, default=0.3)
    args = ap.parse_args()

    tables = load_tables(args.out)
    groups = []  # (category, label)
    owner = {}

    def pin(word, gid):
        if word in owner and owner[word] != gid:
            sys.exit(f"word '{word}' pinned twice")
        owner[word] = gid

    for cat, _, _, words, _ in INTENTS:
        groups.append((cat, words[0]))
        for w in words:
            pin(w, len(groups) - 1)
    for cat, words, _ in TRAINING_ONLY:
        groups.append((cat, words[0]))
        for w in words:
            pin(w, len(groups) - 1)

    kb, train = [], []
    for gid, (cat, questions, answer, _, extra) in enumerate(INTENTS):
        for q in questions:
            kb.append({"question": q, "answer": answer, "category": cat})
            train.append({"question": q, "category": cat})
        for q in extra:
            train.append({"question": q, "category": cat})
    for cat, _, extra in TRAINING_ONLY:
        for q in extra:
            train.append({"question": q, "category": cat})

    missing = set()
    for rec in kb + train:
        toks = normalize(rec["question"], tables)
        if not toks:
            sys.exit(f"question normalizes to nothing: {rec['question']}")
        missing.update(t for t in toks if t not in owner)
    if missing:
        sys.exit("unpinned words: " + " ".join(sorted(missing)))

    rng = random.Random(args.seed)
    cat_vec = {c: unit(rng, args.dim) for c in CATEGORIES}
    group_vec = [unit(rng, args.dim) for _ in groups]
    rows = []
    for word in sorted(owner):
        cat, _ = groups[owner[word]]
        noise = unit(rng, args.dim)
        v = [args.cat_weight * a + args.group_weight * b + args.noise * c
             for a, b, c in zip(cat_vec[cat], group_vec[owner[word]], noise)]
        rows.append(word + " " + " ".join(f"{x:.6f}" for x in v))

    with open(os.path.join(args.out, "vectors.vec"), "w", encoding="utf-8", newline="\n") as f:
        f.write(f"{len(rows)} {args.dim}\n")
        f.write("\n".join(rows) + "\n")
    for name, recs in (("kb.jsonl", kb), ("train.jsonl", train)):
        with open(os.path.join(args.out, name), "w", encoding="utf-8", newline="\n") as f:
            for r in recs:
                f.write(json.dumps(r, ensure_ascii=False) + "\n")
    print(f"{len(rows)} words, {len(kb)} kb entries, {len(train)} training questions", file=sys.stderr)


if __name__ == "__main__":
    main()
