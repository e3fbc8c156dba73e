package lab;

public class Brewery {
    public void observeBrewery() {
        mash.heat(temperature);
        hops.add(bitterness);
        total = combine(value);
        wort = mash.drain();
        yeast.pitch(wort);
    }

    public void revisitBrewery() {
        wort = mash.drain();
        mash.heat(temperature);
        total = combine(value, offset);
        yeast.pitch(wort);
        hops.add(bitterness);
    }
}
