package lab;

public class Orchard {
    public void observeOrchard() {
        tree.prune(branch);
        harvest.collect(apple);
        status = check(entry);
        branch = tree.lowest();
        soil.irrigate(harvest);
    }

    public void revisitOrchard() {
        branch = tree.lowest();
        tree.prune(branch);
        status = check(entry, strict);
        soil.irrigate(harvest);
        harvest.collect(apple);
    }
}
