#!/usr/bin/env python3
"""Writes data/lexicon.tsv (word<TAB>POS) from the word lists below."""
import pathlib

NOUN = """
airplane apple axe bag ball balloon banana basket bat bean beanstalk bear bed bee bench bicycle bird
boat book bottle bowl box boy branch bread brick bridge bucket building bus bush butterfly cage cake
camel candle car carrot castle cat cave chair cheese chicken child cloud cock coin cow crown cup deer
desk dog dolphin door dragon duck duckling eagle egg elephant eye face family farmer father fence
field fire fish floor flower forest forester fox frog garden giant giraffe girl glass goat goose
grandmother grape grass hair hand hare hat hen hill hole hood horse hound house hunter ice island jar
key king kid kitchen knife ladder lake lamp leaf lion man meadow mirror monkey moon mother mountain mouse
mouth net ocean oven owl palace path paw pear pen penguin person pig pillow plate pond pool pot prince
princess queen rabbit rain river road rock roof rooster rose sand sea sheep shepherd ship shoe sky
snake snow soldier song sheep spider star stick stone straw street sun swan sweater swing-set table
tail tent tiger toy tower town train tree troll turtle umbrella unicorn valley vine voice wall water
well whale wheel window witch wizard wolf woman wood yard zebra headlight sofa road clock hat jacket kite
shirt ground grass mountain bear crab snail squirrel village cloud rainbow flag boot gift story
night day morning head leg wing shadow
""".split()

VERB = """
ate became begged blew brought built came carried caught chased chewed climbed closed cried cut danced
dropped fell flew followed found gave go grabbed grew heard helped hung jumped kept kissed laughed let
licked listened lived looked met missed played praised pushed put ran roared said sang sat saved saw
slept sold swam threw took trapped waited walked wanted watched were wore was is are had has got went
sleep eat run jump play sing dance fly swim walk chase catch climb find see look hide help dream
wait watch carry follow meet visit love like want hope kiss laugh cry open close build sail ride
rode hid loved liked hoped dreamed visited opened sailed wished wish stood stand talked talk told
tell asked ask thought think knew know met smiled smile shouted shout whispered whisper tried try
became become made make held hold sits sat stands leaned flying riding holding sitting standing eating
looking wearing playing lying hanging walking running carrying watching
ridden leaped leapt sniffed smelled spoke spoken gone done been seen taken given eaten fallen
driven woke crept hopped rushed hurried called answered stayed turned returned ran
""".split()

ADJ = """
angry beautiful big black blue brave brown clever dark fat ferocious golden good gray green
happy huge hungry kind little lonely magic old pink poor purple red sad short small sour strong
tall tiny tired ugly white wild wise yellow young orange gentle lazy quick slow sleepy shiny silver
wooden cold warm bright brick
""".split()

ADP = """
above across after against along among around at before behind below beneath beside between by
down for from in inside into near of off on onto out outside over past through to toward towards
under underneath up upon with within without left right front
""".split()

PRON = "he him she it they them himself herself itself themselves".split()

DET = "a an the this that these those his her its their my your our every each some another no".split()

OTHER = """
and or but not very so then too also again away there here when while because if than as all
two three four five one third first second many much more most once just never always
""".split()


def main():
    table = {}
    for pos, words in [("OTHER", OTHER), ("NOUN", NOUN), ("ADJ", ADJ), ("VERB", VERB),
                       ("ADP", ADP), ("PRON", PRON), ("DET", DET)]:
        for w in words:
            table[w] = pos  # later lists win
    out = pathlib.Path(__file__).resolve().parents[2] / "data" / "lexicon.tsv"
    with out.open("w") as f:
        for w in sorted(table):
            f.write(f"{w}\t{table[w]}\n")
    print(f"wrote {len(table)} entries to {out}")


if __name__ == "__main__":
    main()
