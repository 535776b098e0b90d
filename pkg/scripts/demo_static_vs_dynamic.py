#!/usr/bin/env python3
"""Show the static-vs-dynamic ordering flip on the reference fixture.

The searcher assigns ouest-france the highest static trust (55.00), yet
their recorded interactions favor TechCrunch, whose dynamic trust reaches
56.02 for this query. Run:

    python3 scripts/demo_static_vs_dynamic.py
"""

from trustnet.fixtures import SEARCHER, build_inversion_app


def show(title, page):
    print(f"\n{title}  (total {page['total']})")
    print(f"{'rank':<5}{'trust':<8}{'author':<14}text")
    for result in page["results"]:
        print(f"{result['rank']:<5}{result['trust']:<8}{result['author']:<14}"
              f"{result['text']}")


def main():
    app = build_inversion_app()
    show("search 'apple' under STATIC trust",
         app.api_search(SEARCHER, {"q": "apple", "mode": "static"}))
    show("search 'apple' under DYNAMIC trust",
         app.api_search(SEARCHER, {"q": "apple", "mode": "dynamic"}))
    print("\nThe user ranked ouest-france highest, but their own activity"
          "\n(8 favorites, 3 retweets, 1 mention toward TechCrunch) inverts"
          "\nthe ordering once dynamic trust is enabled.")


if __name__ == "__main__":
    main()
