#!/usr/bin/env python3
"""Generate the desk-scale knowledge-graph fixture (data/fixture.jsonl).

The curated core holds the award, movie, president and qualifier facts used
by the example queries; the remainder is deterministic synthetic filler
(people and films) that gives the vector search realistic competition.

Run with --check to verify the resolver-facing properties of the fixture
with a Python mirror of the built-in trigram embedding.
"""

import argparse
import json
import math
import random
import string
import sys

PROPERTIES = [
    ("P31", "instance of", "class of which this subject is a particular example", "entity_id"),
    ("P279", "subclass of", "this class is a more specific kind of another class", "entity_id"),
    ("P166", "award received", "award or recognition received by a person or work", "entity_id"),
    ("P1411", "nominated for", "award nomination the subject got", "entity_id"),
    ("P57", "director", "director(s) of film, TV series or stage play", "entity_id"),
    ("P26", "spouse", "the subject is married to the object", "entity_id"),
    ("P161", "cast member", "actor in the work", "entity_id"),
    ("P58", "screenwriter", "person who wrote the script", "entity_id"),
    ("P162", "producer", "person who produced the work", "entity_id"),
    ("P86", "composer", "person who wrote the music", "entity_id"),
    ("P39", "position held", "subject holds the position or office", "entity_id"),
    ("P580", "start time", "time a statement starts", "date"),
    ("P582", "end time", "time a statement ends", "date"),
    ("P585", "point in time", "time an event took place", "date"),
    ("P1365", "replaces", "person or item replaced", "entity_id"),
    ("P1366", "replaced by", "successor in the role", "entity_id"),
    ("P569", "date of birth", "date on which the subject was born", "date"),
    ("P570", "date of death", "date on which the subject died", "date"),
    ("P19", "place of birth", "most specific known birth location", "entity_id"),
    ("P27", "country of citizenship", "country of which the subject is a citizen", "entity_id"),
    ("P106", "occupation", "occupation of a person", "entity_id"),
    ("P2048", "height", "vertical size in metres", "numeric"),
    ("P577", "publication date", "date when the work was first released", "date"),
    ("P136", "genre", "creative work's genre", "entity_id"),
    ("P495", "country of origin", "country of origin of this work", "entity_id"),
    ("P2047", "duration", "running time in minutes", "numeric"),
    ("P1476", "title", "published name of a work", "string"),
    ("P1477", "birth name", "full name of a person at birth", "string"),
    ("P102", "member of political party", "political party of a person", "entity_id"),
    ("P69", "educated at", "school or university attended", "entity_id"),
    ("P108", "employer", "organization the person works for", "entity_id"),
    ("P2142", "box office", "money earned in cinemas", "numeric"),
]


class Builder:
    def __init__(self):
        self.entities = {}
        self.order = []

    def entity(self, qid, label, description, popularity=0):
        assert qid not in self.entities, qid
        self.entities[qid] = {
            "type": "entity",
            "id": qid,
            "label": label,
            "description": description,
            "popularity": popularity,
            "claims": [],
        }
        self.order.append(qid)
        return qid

    def claim(self, subject, prop, datatype, value, qualifiers=None, statement_id=None):
        c = {"property": prop, "datatype": datatype, "value": value}
        if qualifiers:
            c["qualifiers"] = [
                {"property": p, "datatype": d, "value": v} for (p, d, v) in qualifiers
            ]
        if statement_id:
            c["statement_id"] = statement_id
        self.entities[subject]["claims"].append(c)

    def ent(self, subject, prop, target, qualifiers=None):
        assert target in self.entities, target
        self.claim(subject, prop, "entity_id", target, qualifiers)


def build():
    rng = random.Random(20240127)
    b = Builder()

    # Classes and generic items.
    b.entity("Q5", "human", "common name of Homo sapiens", 300)
    b.entity("Q11424", "film", "motion picture, also called a movie", 250)
    b.entity("Q2512663", "Movie", "Wikimedia disambiguation page", 5)
    b.entity("Q12362625", "Film", "album by Tiziano Ferro", 3)
    b.entity("Q223770", "B movie", "low budget commercial motion picture", 60)
    b.entity("Q6256", "country", "distinct territorial body or political entity", 200)
    b.entity("Q618779", "award", "something given in recognition of excellence", 150)
    b.entity("Q30", "United States of America", "country in North America", 400)
    b.entity("Q145", "United Kingdom", "country in north-west Europe", 350)
    b.entity("Q142", "France", "country in western Europe", 350)
    b.entity("Q38", "Italy", "country in southern Europe", 330)
    b.entity("Q183", "Germany", "country in central Europe", 340)
    b.entity("Q29", "Spain", "country in south-west Europe", 320)
    for c in ["Q30", "Q145", "Q142", "Q38", "Q183", "Q29"]:
        b.ent(c, "P31", "Q6256")

    occupations = {
        "Q82955": ("politician", "person involved in politics"),
        "Q82594": ("computer scientist", "scientist specialising in computing"),
        "Q2526255": ("film director", "filmmaker"),
        "Q33999": ("actor", "person who acts in a dramatic production"),
        "Q28389": ("screenwriter", "writer of film scripts"),
        "Q36834": ("composer", "musician"),
    }
    for qid, (label, desc) in occupations.items():
        b.entity(qid, label, desc, 90)

    genres = {
        "Q130232": ("drama film", "film genre with serious themes"),
        "Q157443": ("comedy film", "film genre intended to make audiences laugh"),
        "Q2484376": ("thriller film", "film genre with suspense"),
        "Q471839": ("science fiction film", "film genre with speculative science"),
        "Q1054574": ("romance film", "film genre centred on love"),
        "Q200092": ("horror film", "film genre meant to frighten"),
    }
    for qid, (label, desc) in genres.items():
        b.entity(qid, label, desc, 70)
        b.ent(qid, "P279", "Q11424")

    b.entity("Q29552", "Democratic Party", "political party in the United States", 120)
    b.entity("Q29468", "Republican Party", "political party in the United States", 120)
    b.entity("Q49108", "Massachusetts Institute of Technology", "private research university in Cambridge", 150)
    b.entity("Q41506", "Stanford University", "private research university in California", 150)
    b.entity("Q49088", "Columbia University", "private university in New York City", 140)
    b.entity("Q13371", "Harvard University", "private university in Cambridge", 160)
    b.entity("Q35794", "University of Cambridge", "collegiate university in England", 160)
    b.entity("Q127990", "Pixar", "American animation studio", 110)
    b.entity("Q1426464", "Maida Vale", "area of west London", 20)

    # Awards around "Oscar for Merit" and "Turing Award".
    b.entity("Q8624", "Academy Award of Merit", "Oscar", 95)
    b.entity("Q7408872", "Medal of Merit", "decoration of honour", 8)
    b.entity("Q1702885", "Medal for Merit to Culture", "Polish state decoration", 6)
    b.entity("Q1307005", "Medal for Merit", "United States civilian decoration", 15)
    b.entity("Q3753203", "Gold Medal of Merit in the Fine Arts", "Spanish honour for artists", 9)
    b.entity("Q185667", "Turing Award", "ACM prize in computing", 120)
    b.entity("Q163310", "Turing machine", "abstract model of computation", 110)
    b.entity("Q9241105", "Category:Turing Award", "Wikimedia category", 2)
    b.entity("Q490481", "Turing", "surname", 12)
    b.entity("Q7251", "Alan Turing", "English mathematician", 260)
    b.entity("Q102427", "Academy Award for Best Director", "film directing prize", 90)
    b.entity("Q103916", "Academy Award for Best Actress", "film acting prize", 90)
    b.entity("Q103618", "Academy Award for Best Actor", "film acting prize for men", 90)
    b.entity("Q102427001", "Scientific and Engineering Award", "technical honour for film science", 25)
    b.entity("Q17144", "Primetime Emmy Award", "television honour", 70)
    b.entity("Q41254", "Grammy Award", "music industry honour", 80)
    b.entity("Q35637", "Nobel Peace Prize", "one of the five Nobel Prizes", 200)
    b.entity("Q1052904", "Presidential Medal of Freedom", "highest civilian honour of the United States", 80)
    for award in ["Q8624", "Q7408872", "Q1702885", "Q1307005", "Q3753203", "Q185667",
                  "Q102427", "Q103916", "Q103618", "Q102427001", "Q17144", "Q41254",
                  "Q35637", "Q1052904"]:
        b.ent(award, "P31", "Q618779")

    def person(qid, label, desc, pop, born=None, citizen="Q30", occupation=None, height=None):
        b.entity(qid, label, desc, pop)
        b.ent(qid, "P31", "Q5")
        if born:
            b.claim(qid, "P569", "date", born)
        if citizen:
            b.ent(qid, "P27", citizen)
        if occupation:
            b.ent(qid, "P106", occupation)
        if height is not None:
            b.claim(qid, "P2048", "numeric", height)
        return qid

    # Computer scientists.
    person("Q92820", "Edwin Catmull", "computer scientist and Pixar cofounder", 80,
           "1945-03-31", occupation="Q82594", height=1.8)
    b.ent("Q92820", "P166", "Q8624", [("P585", "date", "2009-02-07")])
    b.ent("Q92820", "P166", "Q185667", [("P585", "date", "2019-03-18")])
    b.ent("Q92820", "P108", "Q127990")
    person("Q92827", "Pat Hanrahan", "computer graphics researcher", 40,
           "1954-11-27", occupation="Q82594")
    b.ent("Q92827", "P166", "Q185667", [("P585", "date", "2019-03-18")])
    b.ent("Q92827", "P166", "Q102427001", [("P585", "date", "2004-02-14")])
    b.ent("Q92827", "P69", "Q41506")
    b.ent("Q92827", "P108", "Q127990")
    scientists = [
        ("Q17457", "Donald Knuth", "author of The Art of Computer Programming", "1938-01-10", "1974-01-01"),
        ("Q92894", "Geoffrey Hinton", "pioneer of deep learning", "1947-12-06", "2018-03-27"),
        ("Q3572699", "Yoshua Bengio", "deep learning researcher", "1964-03-05", "2018-03-27"),
        ("Q80", "Tim Berners-Lee", "inventor of the World Wide Web", "1955-06-08", "2016-04-04"),
        ("Q11617", "Barbara Liskov", "programming methodology researcher", "1939-11-07", "2008-03-10"),
        ("Q92743", "Alan Kay", "object oriented programming pioneer", "1940-05-17", "2003-03-09"),
        ("Q92803", "Ivan Sutherland", "inventor of Sketchpad", "1938-05-16", "1988-01-01"),
        ("Q92641", "Edsger W. Dijkstra", "Dutch programming theorist", "1930-05-11", "1972-01-01"),
        ("Q92743001", "Frances Allen", "compiler optimization pioneer", "1932-08-04", "2006-02-21"),
        ("Q92743002", "Leslie Lamport", "distributed systems researcher", "1941-02-07", "2013-03-18"),
    ]
    for qid, label, desc, born, year in scientists:
        citizen = "Q145" if qid in ("Q80", "Q92894") else "Q30"
        person(qid, label, desc, 60, born, citizen=citizen, occupation="Q82594")
        b.ent(qid, "P166", "Q185667", [("P585", "date", year)])

    # Alan Turing himself.
    b.ent("Q7251", "P31", "Q5")
    b.claim("Q7251", "P569", "date", "1912-06-23")
    b.claim("Q7251", "P570", "date", "1954-06-07")
    b.ent("Q7251", "P19", "Q1426464")
    b.ent("Q7251", "P27", "Q145")
    b.ent("Q7251", "P106", "Q82594")
    b.ent("Q7251", "P69", "Q35794")
    b.claim("Q7251", "P1477", "string", "Alan Mathison Turing")

    # Other award recipients, none of which combine a merit medal with a
    # Turing-neighbourhood entity.
    person("Q1001001", "Vannevar Bush", "engineer and science administrator", 50,
           "1890-03-11", occupation="Q82594")
    b.ent("Q1001001", "P166", "Q1307005", [("P585", "date", "1948-01-01")])
    person("Q1001002", "Joan Miro", "Catalan painter", 70,
           "1893-04-20", citizen="Q29")
    b.ent("Q1001002", "P166", "Q3753203")
    person("Q1001003", "Wislawa Szymborska", "Polish poet and essayist", 40,
           "1923-07-02", citizen=None)
    b.ent("Q1001003", "P166", "Q1702885")
    person("Q1001004", "Ray Harryhausen", "visual effects creator", 35,
           "1920-06-29", occupation="Q2526255")
    b.ent("Q1001004", "P166", "Q8624")
    b.ent("Q1001004", "P166", "Q7408872")

    # US presidents with heights and position statements with qualifiers.
    b.entity("Q11696", "President of the United States", "American head of state", 280)
    b.entity("Q4416090", "United States senator", "member of the United States Senate", 100)
    b.entity("Q11699", "Vice President of the United States", "second highest officer of the executive branch", 150)
    presidents = [
        ("Q23", "George Washington", "1732-02-22", 1.88, "1789-04-30", "1797-03-04", "Q1"),
        ("Q11806", "John Adams", "1735-10-30", 1.70, "1797-03-04", "1801-03-04", "Q1"),
        ("Q91", "Abraham Lincoln", "1809-02-12", 1.93, "1861-03-04", "1865-04-15", "Q29468"),
        ("Q35171", "Grover Cleveland", "1837-03-18", 1.80, "1885-03-04", "1889-03-04", "Q29552"),
        ("Q8007", "Franklin D. Roosevelt", "1882-01-30", 1.88, "1933-03-04", "1945-04-12", "Q29552"),
        ("Q9916", "Dwight D. Eisenhower", "1890-10-14", 1.79, "1953-01-20", "1961-01-20", "Q29468"),
        ("Q9696", "John F. Kennedy", "1917-05-29", 1.83, "1961-01-20", "1963-11-22", "Q29552"),
        ("Q9588", "Richard Nixon", "1913-01-09", 1.82, "1969-01-20", "1974-08-09", "Q29468"),
        ("Q23685", "Jimmy Carter", "1924-10-01", 1.77, "1977-01-20", "1981-01-20", "Q29552"),
        ("Q9960", "Ronald Reagan", "1911-02-06", 1.85, "1981-01-20", "1989-01-20", "Q29468"),
        ("Q23505", "George H. W. Bush", "1924-06-12", 1.88, "1989-01-20", "1993-01-20", "Q29468"),
        ("Q1124", "Bill Clinton", "1946-08-19", 1.88, "1993-01-20", "2001-01-20", "Q29552"),
        ("Q207", "George W. Bush", "1946-07-06", 1.82, "2001-01-20", "2009-01-20", "Q29468"),
        ("Q76", "Barack Obama", "1961-08-04", 1.87, "2009-01-20", "2017-01-20", "Q29552"),
        ("Q22686", "Donald Trump", "1946-06-14", 1.90, "2017-01-20", "2021-01-20", "Q29468"),
        ("Q6279", "Joe Biden", "1942-11-20", 1.82, "2021-01-20", "2025-01-20", "Q29552"),
    ]
    prev = None
    for qid, label, born, height, start, end, party in presidents:
        pop = 320 if qid == "Q76" else 200 + (int(qid[1:]) % 50)
        person(qid, label, "American statesman", pop, born, occupation="Q82955", height=height)
        if party != "Q1":
            b.ent(qid, "P102", party)
        quals = [("P580", "date", start), ("P582", "date", end)]
        if prev:
            quals.append(("P1365", "entity_id", prev))
        b.ent(qid, "P39", "Q11696", quals)
        prev = qid
    # Statements for other offices.
    b.ent("Q76", "P39", "Q4416090", [("P580", "date", "2005-01-03"), ("P582", "date", "2008-11-16")])
    b.ent("Q6279", "P39", "Q11699", [("P580", "date", "2009-01-20"), ("P582", "date", "2017-01-20")])
    b.ent("Q6279", "P39", "Q4416090", [("P580", "date", "1973-01-03"), ("P582", "date", "2009-01-15")])
    b.ent("Q9588", "P39", "Q11699", [("P580", "date", "1953-01-20"), ("P582", "date", "1961-01-20")])
    b.ent("Q76", "P166", "Q35637", [("P585", "date", "2009-10-09")])
    b.ent("Q23685", "P166", "Q35637", [("P585", "date", "2002-10-11")])
    b.ent("Q76", "P69", "Q13371")
    b.ent("Q76", "P69", "Q49088")
    b.claim("Q76", "P1477", "string", "Barack Hussein Obama II")
    b.claim("Q9696", "P570", "date", "1963-11-22")
    b.claim("Q91", "P570", "date", "1865-04-15")
    b.claim("Q23", "P570", "date", "1799-12-14")

    # Real director/spouse/cast triangles.
    people = {}

    def film_person(qid, label, desc, pop, born, citizen="Q30", occupation="Q33999"):
        people[qid] = label
        return person(qid, label, desc, pop, born, citizen=citizen, occupation=occupation)

    film_person("Q56093", "Blake Edwards", "filmmaker of comedies", 70, "1922-07-26", occupation="Q2526255")
    film_person("Q161819", "Julie Andrews", "English singer and actress", 120, "1935-10-01", citizen="Q145")
    film_person("Q13595311", "Joel Coen", "filmmaker, one of the Coen brothers", 90, "1954-11-29", occupation="Q2526255")
    film_person("Q204299", "Frances McDormand", "stage and screen actress", 110, "1957-06-23")
    film_person("Q56005", "Tim Burton", "filmmaker of gothic fantasy", 130, "1958-08-25", occupation="Q2526255")
    film_person("Q170428", "Helena Bonham Carter", "English actress", 110, "1966-05-26", citizen="Q145")
    film_person("Q53004", "Roberto Rossellini", "Italian filmmaker", 80, "1906-05-08", citizen="Q38", occupation="Q2526255")
    film_person("Q43247", "Ingrid Bergman", "Swedish actress", 150, "1915-08-29", citizen=None)
    film_person("Q53001", "Jean-Luc Godard", "French-Swiss filmmaker", 120, "1930-12-03", citizen="Q142", occupation="Q2526255")
    film_person("Q232985", "Anna Karina", "Danish-French actress", 60, "1940-09-22", citizen="Q142")
    film_person("Q223687", "Sam Mendes", "English stage and film director", 90, "1965-08-01", citizen="Q145", occupation="Q2526255")
    film_person("Q202765", "Kate Winslet", "English actress", 140, "1975-10-05", citizen="Q145")
    film_person("Q295360", "Paul W. S. Anderson", "English filmmaker of action films", 50, "1965-03-04", citizen="Q145", occupation="Q2526255")
    film_person("Q40096", "Milla Jovovich", "Ukrainian-born actress and model", 90, "1975-12-17")
    film_person("Q51575", "Stanley Donen", "director of musicals", 40, "1924-04-13", occupation="Q2526255")
    film_person("Q16473", "George C. Scott", "stage and screen actor", 40, "1927-10-18")
    film_person("Q25089", "Woody Allen", "comedian and filmmaker", 130, "1935-11-30", occupation="Q2526255")
    film_person("Q104000", "Diane Keaton", "actress and director", 100, "1946-01-05")
    film_person("Q3772", "Quentin Tarantino", "writer and director", 150, "1963-03-27", occupation="Q2526255")
    film_person("Q125017", "Uma Thurman", "actress and model", 110, "1970-04-29")
    film_person("Q4465", "Peter Jackson", "New Zealand filmmaker", 130, "1961-10-31", citizen=None, occupation="Q2526255")
    film_person("Q190386", "Liv Tyler", "actress and model", 80, "1977-07-01")
    film_person("Q315087", "Garry Marshall", "director of comedies", 60, "1934-11-13", occupation="Q2526255")
    film_person("Q40523", "Julia Roberts", "actress of romantic comedies", 140, "1967-10-28")
    film_person("Q103917", "Clint Eastwood", "actor and director of westerns", 150, "1930-05-31", occupation="Q2526255")

    def spouse(a, z, start=None):
        q = [("P580", "date", start)] if start else None
        b.ent(a, "P26", z, q)
        b.ent(z, "P26", a, q)

    spouse("Q56093", "Q161819", "1969-11-12")
    spouse("Q13595311", "Q204299", "1984-04-01")
    b.ent("Q56005", "P26", "Q170428")   # one-directional claim, as in many dumps
    spouse("Q53004", "Q43247", "1950-05-24")
    spouse("Q53001", "Q232985", "1961-03-03")
    spouse("Q223687", "Q202765", "2003-05-24")
    spouse("Q295360", "Q40096", "2009-08-22")

    films = {}

    def film(qid, label, year, director, cast, genre, country="Q30", duration=None):
        films[qid] = label
        b.entity(qid, label, f"{year} film", 30 + (int(qid[1:]) % 40))
        b.ent(qid, "P31", "Q11424")
        b.ent(qid, "P57", director)
        for c in cast:
            b.ent(qid, "P161", c)
        b.claim(qid, "P577", "date", f"{year}-01-01")
        b.ent(qid, "P136", genre)
        b.ent(qid, "P495", country)
        if duration:
            b.claim(qid, "P2047", "numeric", duration)
        b.claim(qid, "P1476", "string", label)

    film("Q1414524", "Victor/Victoria", 1982, "Q56093", ["Q161819"], "Q157443", duration=134)
    film("Q1414525", "Darling Lili", 1970, "Q56093", ["Q161819"], "Q1054574", duration=136)
    film("Q222720", "Fargo", 1996, "Q13595311", ["Q204299"], "Q2484376", duration=98)
    film("Q222721", "Blood Simple", 1984, "Q13595311", ["Q204299"], "Q2484376", duration=96)
    film("Q217182", "Sweeney Todd: The Demon Barber of Fleet Street", 2007, "Q56005", ["Q170428"], "Q200092", duration=116)
    film("Q217183", "Edward Scissorhands", 1990, "Q56005", [], "Q1054574", duration=105)
    film("Q1050308", "Stromboli", 1950, "Q53004", ["Q43247"], "Q130232", country="Q38", duration=107)
    film("Q1050309", "Journey to Italy", 1954, "Q53004", ["Q43247"], "Q130232", country="Q38", duration=97)
    film("Q1049174", "Pierrot le Fou", 1965, "Q53001", ["Q232985"], "Q130232", country="Q142", duration=110)
    film("Q1049175", "Breathless", 1960, "Q53001", [], "Q130232", country="Q142", duration=90)
    film("Q1188516", "Revolutionary Road", 2008, "Q223687", ["Q202765"], "Q130232", duration=119)
    film("Q1188517", "American Beauty", 1999, "Q223687", [], "Q130232", duration=122)
    film("Q1144406", "Resident Evil", 2002, "Q295360", ["Q40096"], "Q200092", country="Q183", duration=100)
    film("Q1144407", "Event Horizon", 1997, "Q295360", [], "Q471839", country="Q145", duration=96)
    film("Q1405677", "Movie Movie", 1978, "Q51575", ["Q16473"], "Q157443", duration=105)
    film("Q213081", "Annie Hall", 1977, "Q25089", ["Q104000", "Q25089"], "Q157443", duration=93)
    film("Q104123", "Pulp Fiction", 1994, "Q3772", ["Q125017"], "Q2484376", duration=154)
    film("Q127367", "The Lord of the Rings: The Fellowship of the Ring", 2001, "Q4465", ["Q190386"], "Q471839", duration=178)
    film("Q188652", "Pretty Woman", 1990, "Q315087", ["Q40523"], "Q1054574", duration=119)
    film("Q16459", "Unforgiven", 1992, "Q103917", ["Q103917"], "Q130232", duration=130)

    awards = [("Q103916", "Q204299", "1997-03-24"), ("Q103916", "Q202765", "2009-02-22"),
              ("Q103916", "Q161819", "1965-04-05"), ("Q103916", "Q43247", "1945-03-15"),
              ("Q103916", "Q104000", "1978-04-03"), ("Q103916", "Q40523", "2001-03-25"),
              ("Q102427", "Q223687", "2000-03-26"), ("Q102427", "Q4465", "2004-02-29"),
              ("Q102427", "Q103917", "1993-03-29"), ("Q102427", "Q25089", "1978-04-03")]
    for award, who, date in awards:
        b.ent(who, "P166", award, [("P585", "date", date)])
    b.ent("Q3772", "P1411", "Q102427")
    b.ent("Q13595311", "P1411", "Q102427")

    # Synthetic filler: people and films drawn from disjoint name pools.
    syllables = ["ka", "lor", "ven", "mi", "tra", "sol", "dun", "bre", "xi", "pha",
                 "gor", "el", "qua", "rin", "zu", "mo", "tesh", "vy", "ol", "fen",
                 "ja", "sku", "nad", "wil", "ob", "cre", "ith", "pan", "hu", "zel"]

    def pseudo_name(parts):
        return "".join(rng.choice(syllables) for _ in range(parts)).capitalize()

    used_names = set()
    syn_people = []
    next_id = 7000000
    countries = ["Q30", "Q145", "Q142", "Q38", "Q183", "Q29"]
    while len(syn_people) < 90:
        name = f"{pseudo_name(2)} {pseudo_name(3)}"
        if name in used_names:
            continue
        used_names.add(name)
        qid = f"Q{next_id}"
        next_id += 1
        occ = rng.choice(["Q33999", "Q33999", "Q2526255", "Q28389", "Q36834"])
        role = {"Q33999": "performer", "Q2526255": "filmmaker", "Q28389": "writer",
                "Q36834": "musician"}[occ]
        year = rng.randint(1920, 1995)
        born = f"{year}-{rng.randint(1, 12):02d}-{rng.randint(1, 28):02d}"
        person(qid, name, f"fictional {role}", rng.randint(0, 40), born,
               citizen=rng.choice(countries), occupation=occ,
               height=round(rng.uniform(1.55, 1.95), 2) if rng.random() < 0.5 else None)
        if rng.random() < 0.3:
            b.ent(qid, "P69", rng.choice(["Q49108", "Q41506", "Q49088", "Q13371", "Q35794"]))
        syn_people.append((qid, occ))
        people[qid] = name

    directors = [q for q, o in syn_people if o == "Q2526255"]
    actors = [q for q, o in syn_people if o == "Q33999"]
    writers = [q for q, o in syn_people if o == "Q28389"]
    composers = [q for q, o in syn_people if o == "Q36834"]
    married = set()
    adjectives = ["Silent", "Crimson", "Hollow", "Distant", "Broken", "Golden", "Midnight",
                  "Frozen", "Burning", "Shattered", "Velvet", "Wandering", "Forgotten", "Electric"]
    nouns = ["Harbor", "Orchard", "Citadel", "Meridian", "Lantern", "Canyon", "Archipelago",
             "Glacier", "Monsoon", "Labyrinth", "Cathedral", "Frontier", "Sonata", "Tundra"]
    titles = set()
    syn_films = 0
    while syn_films < 60:
        title = f"The {rng.choice(adjectives)} {rng.choice(nouns)}"
        if title in titles:
            continue
        titles.add(title)
        qid = f"Q{next_id}"
        next_id += 1
        director = rng.choice(directors)
        cast = rng.sample(actors, rng.randint(2, 4))
        # Marry the director to one cast member now and then.
        if director not in married and rng.random() < 0.35:
            partner = next((a for a in cast if a not in married), None)
            if partner:
                spouse(director, partner, f"{rng.randint(1950, 2015)}-06-01")
                married.update([director, partner])
        year = rng.randint(1950, 2020)
        film(qid, title, year, director, cast, rng.choice(list(genres)),
             country=rng.choice(countries), duration=rng.randint(80, 180))
        if rng.random() < 0.6:
            b.ent(qid, "P58", rng.choice(writers))
        if rng.random() < 0.5:
            b.ent(qid, "P86", rng.choice(composers))
        if rng.random() < 0.4:
            b.claim(qid, "P2142", "numeric", rng.randint(1, 900) * 100000)
        syn_films += 1
    # Some marriages outside any film triangle.
    singles = [a for a in actors if a not in married]
    rng.shuffle(singles)
    for a, z in zip(singles[0:12:2], singles[1:12:2]):
        spouse(a, z, f"{rng.randint(1950, 2015)}-09-15")
    # Spare nominations and awards for the filler.
    for qid, occ in syn_people:
        r = rng.random()
        if occ == "Q33999" and r < 0.15:
            b.ent(qid, "P166", "Q103916", [("P585", "date", f"{rng.randint(1960, 2020)}-03-01")])
        elif occ == "Q33999" and r < 0.3:
            b.ent(qid, "P1411", "Q103618")
        elif occ == "Q36834" and r < 0.4:
            b.ent(qid, "P166", "Q41254")
        elif occ == "Q2526255" and r < 0.3:
            b.ent(qid, "P166", "Q17144")

    return b


def write(b, path):
    lines = []
    for pid, label, desc, dtype in PROPERTIES:
        lines.append(json.dumps({"type": "property", "id": pid, "label": label,
                                 "description": desc, "datatype": dtype},
                                ensure_ascii=False))
    for qid in b.order:
        lines.append(json.dumps(b.entities[qid], ensure_ascii=False))
    with open(path, "w", encoding="utf-8") as f:
        f.write("\n".join(lines) + "\n")


# --- Python mirror of the built-in embedding, used only by --check -----------

def fnv1a64(data):
    h = 0xCBF29CE484222325
    for byte in data:
        h ^= byte
        h = (h * 0x100000001B3) & 0xFFFFFFFFFFFFFFFF
    return h


def embed(text, dim=256):
    t = "".join(" " if (c in string.punctuation) else c.lower() for c in text)
    v = [0.0] * dim
    for tok in t.split():
        padded = ("^" + tok + "$").encode("utf-8")
        for i in range(len(padded) - 2):
            v[fnv1a64(padded[i:i + 3]) % dim] += 1
    n = math.sqrt(sum(x * x for x in v))
    if n == 0:
        v[0] = 1.0
        return v
    return [x / n for x in v]


def check(b):
    rows = []
    for pid, label, desc, dtype in PROPERTIES:
        rows.append(("property", pid, label, embed(label + ". " + desc), 0))
    for qid in b.order:
        e = b.entities[qid]
        rows.append(("entity", qid, e["label"], embed(e["label"] + ". " + e["description"]),
                     e["popularity"]))

    def top(keyword, kind, k=5):
        q = embed(keyword)
        scored = [(sum(a * c for a, c in zip(q, v)), pop, rid, lab)
                  for (kd, rid, lab, v, pop) in rows if kd == kind]
        scored.sort(key=lambda s: (-s[0], -s[1], s[2]))
        return [s for s in scored if s[0] >= 0.3][:k]

    for kw, kind in [("Turing Award", "entity"), ("Oscar for Merit", "entity"),
                     ("Oscr for Merit", "entity"), ("received_award", "property"),
                     ("movie", "entity"), ("director", "property"), ("married", "property"),
                     ("cast", "property"), ("actor", "property"), ("position", "property"),
                     ("holds_position", "property"), ("President of the United States", "entity"),
                     ("President", "entity"), ("Barack Obama", "entity"), ("height", "property"),
                     ("start_time", "property"), ("Alan Turing", "entity"),
                     ("date_of_birth", "property")]:
        print(f"{kw!r} [{kind}]")
        for s in top(kw, kind):
            print(f"   {s[2]:>12} {s[0]:.3f} {s[3]}")
    failures = 0
    for (kind, rid, label, _, _) in rows:
        if len(label) < 8:
            continue
        for i in range(len(label)):
            kw = label[:i] + label[i + 1:]
            if rid not in [s[2] for s in top(kw, kind)]:
                failures += 1
                print("robustness miss:", kind, rid, repr(kw))
    claims = sum(len(e["claims"]) for e in b.entities.values())
    print(f"entities={len(b.entities)} properties={len(PROPERTIES)} claims={claims} "
          f"robustness_failures={failures}")
    return failures == 0


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default="data/fixture.jsonl")
    ap.add_argument("--check", action="store_true")
    args = ap.parse_args()
    b = build()
    write(b, args.out)
    if args.check and not check(b):
        sys.exit(1)


if __name__ == "__main__":
    main()
