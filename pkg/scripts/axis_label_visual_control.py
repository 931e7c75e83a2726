from tlsnoise.render.axis_labels.nice_labels import nice_labels


lo = 4.5
hi = 4.51
for i in range(120):
    hi = lo + (hi - lo) * 1.06

    labels = nice_labels(lo, hi, space=60, unit="GHz")
    print(labels.render() if labels is not None else "-")

    labels = nice_labels(lo, hi, space=17, vertical=True)
    print("┐")
    for s in labels.render() if labels is not None else []:
        print("| " + s)
    print("┘")
    print()
